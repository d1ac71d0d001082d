#include <iostream>

#include "khsat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return khsat::runCli(args, std::cout, std::cerr);
}
