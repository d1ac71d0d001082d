#pragma once

#include <cstddef>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "khsat/formula.hpp"

namespace khsat {

using Assignment = std::map<std::string, bool>;
using Clause = std::vector<int>;

struct CnfInstance {
  int varCount = 0;
  std::vector<Clause> clauses;
  // Variables 1..atoms.size() are the atoms in lexicographic order; the rest are definitions.
  std::map<std::string, int> varMap;
};

// Tseitin encoding of the conjunction of fs. extraAtoms get variables even if no formula mentions them.
// Throws std::invalid_argument on a formula with modal depth > 0.
CnfInstance toCnf(std::span<const Formula> fs, const PropSet& extraAtoms = {});
std::string exportDimacs(const CnfInstance& cnf);
// Built-in DPLL: lowest unassigned variable first, false before true. Index 0 of the result is unused.
std::optional<std::vector<bool>> solveCnf(const CnfInstance& cnf);
// Runs `path file.cnf` and reads the competition-format answer.
std::optional<std::vector<bool>> solveCnfExternal(const std::string& path, const CnfInstance& cnf);

struct SatResult {
  bool satisfiable = false;
  Assignment model;  // total over the atoms of the query when satisfiable
  explicit operator bool() const noexcept { return satisfiable; }
};

// Propositional satisfiability oracle. Every check() counts as one call.
class SatOracle {
 public:
  SatOracle() = default;
  explicit SatOracle(std::optional<std::string> externalSolver) : external_(std::move(externalSolver)) {}

  SatResult check(std::span<const Formula> fs);
  SatResult check(std::initializer_list<Formula> fs) { return check(std::span<const Formula>(fs.begin(), fs.size())); }
  bool isSat(std::span<const Formula> fs) { return check(fs).satisfiable; }
  bool isSat(std::initializer_list<Formula> fs) { return check(fs).satisfiable; }

  std::size_t calls() const noexcept { return calls_; }
  const std::optional<std::string>& externalSolver() const noexcept { return external_; }

 private:
  friend class ModelEnumerator;
  std::optional<std::vector<bool>> solve(const CnfInstance& cnf);

  std::optional<std::string> external_;
  std::size_t calls_ = 0;
};

// Yields the distinct projections of the models of f onto proj, one solver call per next().
class ModelEnumerator {
 public:
  ModelEnumerator(SatOracle& oracle, const Formula& f, PropSet proj);
  std::optional<Assignment> next();

 private:
  SatOracle& oracle_;
  CnfInstance cnf_;
  PropSet proj_;
  bool done_ = false;
};

// limit == 0 is rejected.
std::vector<Assignment> enumerateModels(SatOracle& oracle, const Formula& f, const PropSet& proj, std::size_t limit);

// Convenience wrappers over a fresh built-in oracle.
bool isSat(std::span<const Formula> fs);
bool isSat(std::initializer_list<Formula> fs);
std::vector<Assignment> enumerateModels(const Formula& f, const PropSet& proj, std::size_t limit);

}  // namespace khsat
