#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "khsat/propsat.hpp"

namespace khsat {

namespace {

class TseitinEncoder {
 public:
  explicit TseitinEncoder(CnfInstance& cnf) : cnf_(cnf) {}

  int literal(const Formula& f) {
    switch (f.op()) {
      case Op::Atom: return cnf_.varMap.at(f.name());
      case Op::Top: return trueVar();
      case Op::Bottom: return -trueVar();
      case Op::Not: return -literal(f.operand());
      case Op::Kh:
      case Op::Univ:
      case Op::Exis:
        throw std::invalid_argument("propositional query contains a modal subformula: " + render(f));
      default: break;
    }
    if (auto it = cache_.find(f); it != cache_.end()) return it->second;
    int a = literal(f.operand(0)), b = literal(f.operand(1));
    int v = fresh();
    auto& cs = cnf_.clauses;
    switch (f.op()) {
      case Op::Or:
        cs.push_back({-v, a, b});
        cs.push_back({-a, v});
        cs.push_back({-b, v});
        break;
      case Op::And:
        cs.push_back({-v, a});
        cs.push_back({-v, b});
        cs.push_back({-a, -b, v});
        break;
      case Op::Implies:
        cs.push_back({-v, -a, b});
        cs.push_back({a, v});
        cs.push_back({-b, v});
        break;
      case Op::Iff:
        cs.push_back({-v, -a, b});
        cs.push_back({-v, a, -b});
        cs.push_back({v, a, b});
        cs.push_back({v, -a, -b});
        break;
      default:
        throw std::logic_error("unexpected operator in Tseitin encoding");
    }
    cache_.emplace(f, v);
    return v;
  }

 private:
  int fresh() { return ++cnf_.varCount; }

  int trueVar() {
    if (trueVar_ == 0) {
      trueVar_ = fresh();
      cnf_.clauses.push_back({trueVar_});
    }
    return trueVar_;
  }

  CnfInstance& cnf_;
  std::unordered_map<Formula, int, FormulaHash> cache_;
  int trueVar_ = 0;
};

std::string shellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

}  // namespace

CnfInstance toCnf(std::span<const Formula> fs, const PropSet& extraAtoms) {
  PropSet all = extraAtoms;
  for (const auto& f : fs) {
    if (f.depth() > 0) {
      // Name the offending subformula, not just the whole query.
      Formula cur = f;
      while (!cur.isModal()) {
        for (std::size_t i = 0; i < cur.arity(); ++i) {
          if (cur.operand(i).depth() > 0) {
            cur = cur.operand(i);
            break;
          }
        }
      }
      throw std::invalid_argument("propositional query contains a modal subformula: " + render(cur));
    }
    all.merge(atoms(f));
  }
  CnfInstance cnf;
  for (const auto& a : all) cnf.varMap.emplace(a, ++cnf.varCount);
  TseitinEncoder enc(cnf);
  for (const auto& f : fs) cnf.clauses.push_back({enc.literal(f)});
  return cnf;
}

std::string exportDimacs(const CnfInstance& cnf) {
  std::ostringstream os;
  for (const auto& [name, v] : cnf.varMap) os << "c var " << v << " " << name << "\n";
  os << "p cnf " << cnf.varCount << " " << cnf.clauses.size() << "\n";
  for (const auto& c : cnf.clauses) {
    for (int lit : c) os << lit << " ";
    os << "0\n";
  }
  return os.str();
}

std::optional<std::vector<bool>> solveCnfExternal(const std::string& path, const CnfInstance& cnf) {
  namespace fs = std::filesystem;
  std::string tmpl = (fs::temp_directory_path() / "khsat-XXXXXX.cnf").string();
  int fd = mkstemps(tmpl.data(), 4);
  if (fd < 0) throw std::runtime_error("cannot create a temporary CNF file");
  close(fd);
  struct Cleanup {
    std::string path;
    ~Cleanup() {
      std::error_code ec;
      std::filesystem::remove(path, ec);
    }
  } cleanup{tmpl};
  {
    std::ofstream out(tmpl);
    out << exportDimacs(cnf);
  }
  std::string cmd = shellQuote(path) + " " + shellQuote(tmpl) + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot run external solver '" + path + "'");
  std::string output;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  pclose(pipe);

  std::optional<bool> sat;
  std::vector<bool> model(static_cast<std::size_t>(cnf.varCount) + 1, false);
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("s ", 0) == 0) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        sat = false;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        sat = true;
      }
    } else if (line.rfind("v ", 0) == 0) {
      std::istringstream vs(line.substr(2));
      int lit;
      while (vs >> lit) {
        if (lit > 0 && lit <= cnf.varCount) model[static_cast<std::size_t>(lit)] = true;
      }
    }
  }
  if (!sat) throw std::runtime_error("external solver '" + path + "' gave no 's' status line");
  if (!*sat) return std::nullopt;
  return model;
}

std::optional<std::vector<bool>> SatOracle::solve(const CnfInstance& cnf) {
  ++calls_;
  return external_ ? solveCnfExternal(*external_, cnf) : solveCnf(cnf);
}

SatResult SatOracle::check(std::span<const Formula> fs) {
  CnfInstance cnf = toCnf(fs);
  auto model = solve(cnf);
  SatResult r;
  if (!model) return r;
  r.satisfiable = true;
  for (const auto& [name, v] : cnf.varMap) r.model[name] = (*model)[static_cast<std::size_t>(v)];
  return r;
}

ModelEnumerator::ModelEnumerator(SatOracle& oracle, const Formula& f, PropSet proj)
    : oracle_(oracle), proj_(std::move(proj)) {
  Formula fs[] = {f};
  cnf_ = toCnf(fs, proj_);
}

std::optional<Assignment> ModelEnumerator::next() {
  if (done_) return std::nullopt;
  auto model = oracle_.solve(cnf_);
  if (!model) {
    done_ = true;
    return std::nullopt;
  }
  Assignment a;
  Clause block;
  for (const auto& p : proj_) {
    int v = cnf_.varMap.at(p);
    bool val = (*model)[static_cast<std::size_t>(v)];
    a[p] = val;
    block.push_back(val ? -v : v);
  }
  // An empty projection has exactly one projected model.
  if (block.empty()) {
    done_ = true;
  } else {
    cnf_.clauses.push_back(std::move(block));
  }
  return a;
}

std::vector<Assignment> enumerateModels(SatOracle& oracle, const Formula& f, const PropSet& proj, std::size_t limit) {
  if (limit == 0) throw std::invalid_argument("enumerateModels: limit must be positive");
  ModelEnumerator e(oracle, f, proj);
  std::vector<Assignment> out;
  while (out.size() < limit) {
    auto m = e.next();
    if (!m) break;
    out.push_back(std::move(*m));
  }
  return out;
}

bool isSat(std::span<const Formula> fs) {
  SatOracle o;
  return o.isSat(fs);
}

bool isSat(std::initializer_list<Formula> fs) {
  SatOracle o;
  return o.isSat(fs);
}

std::vector<Assignment> enumerateModels(const Formula& f, const PropSet& proj, std::size_t limit) {
  SatOracle o;
  return enumerateModels(o, f, proj, limit);
}

}  // namespace khsat
