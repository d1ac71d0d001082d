#include "khsat/oracle.hpp"

#include <limits>
#include <vector>

namespace khsat {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t satMul(std::uint64_t a, std::uint64_t b) {
  if (a && b > kSaturated / a) return kSaturated;
  return a * b;
}

// Multisets of size r drawn from n kinds: C(n + r - 1, r).
std::uint64_t multichoose(std::uint64_t n, std::uint64_t r) {
  if (n == kSaturated) return kSaturated;
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= r; ++i) {
    acc = acc * (n + r - i) / i;
    if (acc > kSaturated) return kSaturated;
  }
  return static_cast<std::uint64_t>(acc);
}

std::uint64_t pow2(std::size_t e) { return e >= 64 ? kSaturated : std::uint64_t{1} << e; }

// Advances a non-decreasing tuple over [0, limit). Returns the first changed position, or npos at the end.
std::size_t advance(std::vector<std::uint64_t>& c, std::uint64_t limit) {
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] + 1 < limit) {
      ++c[i];
      for (std::size_t j = i + 1; j < c.size(); ++j) c[j] = c[i];
      return i;
    }
  }
  return static_cast<std::size_t>(-1);
}

std::string actionName(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "a" + std::to_string(i);
}

}  // namespace

std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (i + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t exhaustiveModelCount(const SearchBounds& b, std::size_t atomCount) {
  std::uint64_t total = 0;
  for (std::size_t n = 1; n <= b.maxStates; ++n) {
    std::uint64_t vals = multichoose(pow2(atomCount), n);
    std::uint64_t rels = multichoose(pow2(n * n), b.maxActions);
    std::uint64_t here = satMul(vals, rels);
    total = here > kSaturated - total ? kSaturated : total + here;
  }
  return total;
}

SearchOutcome searchModels(const Formula& f, const SearchBounds& b) {
  SearchOutcome out;
  std::vector<std::string> names;
  for (const auto& a : atoms(f)) names.push_back(a);

  auto hit = [&](const Lts& m) {
    ++out.modelsExamined;
    StateSet truth = evalFormula(m, f);
    if (truth.empty()) return false;
    out.model = m;
    out.state = truth.members().front();
    return true;
  };

  if (names.size() <= b.atomBudget && exhaustiveModelCount(b, names.size()) <= b.exhaustiveLimit) {
    out.exhaustiveRan = true;
    std::uint64_t valKinds = pow2(names.size());
    for (std::size_t n = 1; n <= b.maxStates; ++n) {
      Lts m(n);
      for (std::size_t a = 0; a < b.maxActions; ++a) m.addAction(actionName(a));
      std::uint64_t relKinds = pow2(n * n);
      std::vector<std::uint64_t> vals(n, 0);
      do {
        for (std::size_t j = 0; j < names.size(); ++j) {
          StateSet set(n);
          for (StateId s = 0; s < n; ++s)
            if ((vals[s] >> j) & 1U) set.insert(s);
          m.setValuation(names[j], std::move(set));
        }
        std::vector<std::uint64_t> rels(b.maxActions, 0);
        std::size_t changed = 0;
        for (;;) {
          for (std::size_t a = changed; a < rels.size(); ++a) {
            for (StateId s = 0; s < n; ++s) {
              StateSet row(n);
              for (StateId t = 0; t < n; ++t)
                if ((rels[a] >> (s * n + t)) & 1U) row.insert(t);
              m.setSuccessors(a, s, row);
            }
          }
          if (hit(m)) return out;
          changed = advance(rels, relKinds);
          if (changed == static_cast<std::size_t>(-1)) break;
        }
      } while (advance(vals, valKinds) != static_cast<std::size_t>(-1));
    }
  }

  PropSet atomSet(names.begin(), names.end());
  for (std::size_t t = 0; t < b.randomTrials; ++t) {
    Rng rng(deriveSeed(b.seed, t));
    std::size_t states = 1 + rng.below(std::max<std::size_t>(b.maxStates, 1));
    std::size_t actions = rng.below(b.maxActions + 1);
    double density = 0.1 + 0.6 * rng.unit();
    if (hit(randomLts(states, actions, atomSet, density, rng.raw()))) {
      out.fromRandomTier = true;
      return out;
    }
  }
  return out;
}

std::optional<Lts> boundedSatSearch(const Formula& f, const SearchBounds& b) { return searchModels(f, b).model; }

namespace {

class FormulaGen {
 public:
  FormulaGen(std::uint64_t seed, const PropSet& atoms, std::size_t leafMax)
      : rng_(seed), atoms_(atoms.begin(), atoms.end()), khLeft_(leafMax) {}

  Formula gen(std::size_t depth) {
    if (fuel_ > 0) --fuel_;
    std::uint64_t roll = rng_.below(100);
    if (depth > 0 && khLeft_ > 0 && roll < 30) {
      --khLeft_;
      std::uint64_t kind = rng_.below(10);
      if (kind < 6) {
        Formula pre = gen(depth - 1);
        return Formula::kh(pre, gen(depth - 1));
      }
      return kind < 8 ? Formula::universal(gen(depth - 1)) : Formula::existential(gen(depth - 1));
    }
    if (fuel_ == 0 || roll < 55) return atomic();
    std::uint64_t op = rng_.below(20);
    if (op < 5) return Formula::negation(gen(depth));
    Formula a = gen(depth);
    Formula b = gen(depth);
    if (op < 10) return Formula::conjunction(a, b);
    if (op < 15) return Formula::disjunction(a, b);
    if (op < 18) return Formula::implication(a, b);
    return Formula::biconditional(a, b);
  }

 private:
  Formula atomic() {
    std::uint64_t r = rng_.below(40);
    if (atoms_.empty() || r >= 37) return r % 2 ? Formula::top() : Formula::bottom();
    return Formula::atom(atoms_[rng_.below(atoms_.size())]);
  }

  Rng rng_;
  std::vector<std::string> atoms_;
  std::size_t khLeft_;
  std::size_t fuel_ = 12;
};

}  // namespace

Formula randomFormula(std::size_t depthMax, std::size_t leafMax, const PropSet& atoms, std::uint64_t seed) {
  return FormulaGen(seed, atoms, leafMax).gen(depthMax);
}

Lts randomLts(std::size_t states, std::size_t actions, const PropSet& atoms, double density, std::uint64_t seed) {
  Rng rng(seed);
  Lts m(states);
  for (std::size_t a = 0; a < actions; ++a) {
    std::size_t id = m.addAction(actionName(a));
    for (StateId s = 0; s < states; ++s)
      for (StateId t = 0; t < states; ++t)
        if (rng.chance(density)) m.addTransition(id, s, t);
  }
  for (const auto& atom : atoms) {
    StateSet set(states);
    for (StateId s = 0; s < states; ++s)
      if (rng.chance(0.5)) set.insert(s);
    m.setValuation(atom, std::move(set));
  }
  return m;
}

}  // namespace khsat
