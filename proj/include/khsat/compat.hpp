#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "khsat/formula.hpp"
#include "khsat/propsat.hpp"

namespace khsat {

// Kh(pre, post) with propositional pre and post.
struct KhConjunct {
  Formula pre;
  Formula post;
  Formula formula() const { return Formula::kh(pre, post); }
};

// Conjunction of Kh conjuncts.
using PositiveSpec = std::vector<KhConjunct>;
// Conjunction of negated Kh conjuncts; the Kh parts are stored.
using NegativeSpec = std::vector<KhConjunct>;

struct GlobalContext {
  std::vector<std::size_t> indices;   // conjuncts whose pre is empty in every model, sorted, 0-based
  std::vector<Formula> negatedPres;   // ~pre_i for i in indices
  std::vector<std::vector<std::size_t>> sweeps;  // indices added by each sweep
  Formula background() const { return conjoin(negatedPres); }
  bool contains(std::size_t i) const;
};

// Fixpoint of: i is added when post_i is unsatisfiable together with what is already known.
GlobalContext globalIndices(const PositiveSpec& p, SatOracle& oracle);

// Satisfiable witness for the global part of p.
SatResult satPositive(const PositiveSpec& p, const GlobalContext& ctx, SatOracle& oracle);
SatResult satPositive(const PositiveSpec& p, SatOracle& oracle);
// Each negated conjunct on its own.
bool satNegative(const NegativeSpec& q, SatOracle& oracle);

// Reflexive-transitive closure over conjunct indices; (x, y) means a plan for x can be continued into y.
class Closure {
 public:
  explicit Closure(std::size_t n = 0) : n_(n), bits_(n * n, 0) {}
  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t x, std::size_t y) const { return bits_[x * n_ + y] != 0; }
  void set(std::size_t x, std::size_t y) { bits_[x * n_ + y] = 1; }
  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  friend bool operator==(const Closure&, const Closure&) = default;

 private:
  std::size_t n_;
  std::vector<char> bits_;
};

// Edge x->y when post_x entails pre_y under background (n*n oracle calls), then closed by Warshall.
Closure compositionClosure(const PositiveSpec& p, const Formula& background, SatOracle& oracle);

enum class CompatFailure { None, GlobalUnsat, NegativeUnsat, Composition };

struct CompatReport {
  bool compatible = false;
  CompatFailure failure = CompatFailure::None;
  std::size_t failedNegative = 0;  // index into q
  std::pair<std::size_t, std::size_t> failedPair{0, 0};
  GlobalContext context;
  Closure closure;
  std::size_t oracleCalls = 0;
};

CompatReport checkCompatible(const PositiveSpec& p, const NegativeSpec& q, SatOracle& oracle);
bool compatible(const PositiveSpec& p, const NegativeSpec& q, SatOracle& oracle);

// Upper bound on the oracle calls of checkCompatible for n positive and m negative conjuncts:
// n(n+1) for the global sweeps, 1 + m for the propositional checks, n^2 for the closure edges and
// n + 2mn for the memoised composition checks.
std::size_t oracleCallBound(std::size_t n, std::size_t m);

}  // namespace khsat
