#include "khsat/compat.hpp"

#include <algorithm>
#include <optional>

namespace khsat {

namespace {

std::vector<Formula> with(std::vector<Formula> base, std::initializer_list<Formula> extra) {
  base.insert(base.end(), extra.begin(), extra.end());
  return base;
}

}  // namespace

bool GlobalContext::contains(std::size_t i) const {
  return std::binary_search(indices.begin(), indices.end(), i);
}

GlobalContext globalIndices(const PositiveSpec& p, SatOracle& oracle) {
  GlobalContext ctx;
  std::vector<bool> in(p.size(), false);
  // At most n+1 sweeps; a sweep that adds nothing is a fixpoint.
  for (std::size_t sweep = 0; sweep <= p.size(); ++sweep) {
    std::vector<std::size_t> added;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (in[k]) continue;
      if (!oracle.isSat(with(ctx.negatedPres, {p[k].post}))) added.push_back(k);
    }
    if (added.empty()) break;
    for (auto k : added) {
      in[k] = true;
      ctx.negatedPres.push_back(Formula::negation(p[k].pre));
    }
    ctx.sweeps.push_back(std::move(added));
  }
  for (std::size_t k = 0; k < p.size(); ++k)
    if (in[k]) ctx.indices.push_back(k);
  return ctx;
}

SatResult satPositive(const PositiveSpec&, const GlobalContext& ctx, SatOracle& oracle) {
  return oracle.check(ctx.negatedPres);
}

SatResult satPositive(const PositiveSpec& p, SatOracle& oracle) {
  return satPositive(p, globalIndices(p, oracle), oracle);
}

bool satNegative(const NegativeSpec& q, SatOracle& oracle) {
  for (const auto& c : q)
    if (!oracle.isSat({c.pre, Formula::negation(c.post)})) return false;
  return true;
}

std::vector<std::pair<std::size_t, std::size_t>> Closure::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t x = 0; x < n_; ++x)
    for (std::size_t y = 0; y < n_; ++y)
      if ((*this)(x, y)) out.emplace_back(x, y);
  return out;
}

Closure compositionClosure(const PositiveSpec& p, const Formula& background, SatOracle& oracle) {
  std::size_t n = p.size();
  Closure c(n);
  for (std::size_t x = 0; x < n; ++x) {
    c.set(x, x);
    for (std::size_t y = 0; y < n; ++y)
      if (!oracle.isSat({background, p[x].post, Formula::negation(p[y].pre)})) c.set(x, y);
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t x = 0; x < n; ++x)
      if (c(x, k))
        for (std::size_t y = 0; y < n; ++y)
          if (c(k, y)) c.set(x, y);
  return c;
}

CompatReport checkCompatible(const PositiveSpec& p, const NegativeSpec& q, SatOracle& oracle) {
  std::size_t start = oracle.calls();
  CompatReport r;
  auto finish = [&](CompatFailure f) -> CompatReport {
    r.compatible = f == CompatFailure::None;
    r.failure = f;
    r.oracleCalls = oracle.calls() - start;
    return r;
  };

  r.context = globalIndices(p, oracle);
  const auto& psiSet = r.context.negatedPres;
  if (!oracle.isSat(psiSet)) return finish(CompatFailure::GlobalUnsat);

  for (std::size_t j = 0; j < q.size(); ++j) {
    if (!oracle.isSat(with(psiSet, {q[j].pre, Formula::negation(q[j].post)}))) {
      r.failedNegative = j;
      return finish(CompatFailure::NegativeUnsat);
    }
  }

  r.closure = compositionClosure(p, r.context.background(), oracle);

  std::size_t n = p.size(), m = q.size();
  std::vector<std::optional<bool>> preSat(n), entails(m * n), postSat(m * n);
  auto memo = [&](std::optional<bool>& slot, std::initializer_list<Formula> extra) {
    if (!slot) slot = oracle.isSat(with(psiSet, extra));
    return *slot;
  };
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t x = 0; x < n; ++x) {
      // Only a satisfiable pre_x can start a plan; then the negated pre must imply it.
      if (!memo(preSat[x], {p[x].pre})) continue;
      if (memo(entails[j * n + x], {q[j].pre, Formula::negation(p[x].pre)})) continue;
      for (std::size_t y = 0; y < n; ++y) {
        if (!r.closure(x, y)) continue;
        if (!memo(postSat[j * n + y], {p[y].post, Formula::negation(q[j].post)})) {
          r.failedNegative = j;
          r.failedPair = {x, y};
          return finish(CompatFailure::Composition);
        }
      }
    }
  }
  return finish(CompatFailure::None);
}

bool compatible(const PositiveSpec& p, const NegativeSpec& q, SatOracle& oracle) {
  return checkCompatible(p, q, oracle).compatible;
}

std::size_t oracleCallBound(std::size_t n, std::size_t m) {
  return n * (n + 1) + 1 + m + n * n + n + 2 * m * n;
}

}  // namespace khsat
