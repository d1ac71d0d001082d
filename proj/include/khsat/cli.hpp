#pragma once

#include <iosfwd>
#include <json.hpp>
#include <string>
#include <vector>

#include "khsat/decide.hpp"

namespace khsat {

inline constexpr int kExitSat = 10;
inline constexpr int kExitUnsat = 20;
inline constexpr int kExitError = 1;

// Environment variable naming the default external SAT solver.
inline constexpr const char* kSolverEnv = "KHSAT_SOLVER";

nlohmann::ordered_json verdictToJson(const Verdict& v, bool includeTrace);

// args excludes the program name. Returns the process exit code.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace khsat
