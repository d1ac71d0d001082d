#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "khsat/formula.hpp"
#include "khsat/semantics.hpp"

namespace khsat {

struct SearchBounds {
  std::size_t maxStates = 3;
  std::size_t maxActions = 2;
  std::size_t atomBudget = 2;
  std::size_t randomTrials = 200;
  std::uint64_t seed = 0;
  // The exhaustive tier runs only when the formula fits the atom budget and the
  // symmetry-reduced model count stays below this.
  std::uint64_t exhaustiveLimit = std::uint64_t{1} << 22;
};

struct SearchOutcome {
  std::optional<Lts> model;
  std::optional<StateId> state;  // a state where the formula holds
  bool exhaustiveRan = false;
  bool fromRandomTier = false;
  std::uint64_t modelsExamined = 0;
};

// Number of models the exhaustive tier visits for `atomCount` atoms.
std::uint64_t exhaustiveModelCount(const SearchBounds& b, std::size_t atomCount);

// Exhaustive over small models up to isomorphism (states sorted by valuation, action
// relations non-decreasing), then seeded random models. First hit wins.
SearchOutcome searchModels(const Formula& f, const SearchBounds& b);
std::optional<Lts> boundedSatSearch(const Formula& f, const SearchBounds& b);

// Deterministic generators. Formulas have modal depth <= depthMax and at most leafMax Kh/A/E nodes.
Formula randomFormula(std::size_t depthMax, std::size_t leafMax, const PropSet& atoms, std::uint64_t seed);
// Actions are named a, b, c, ...; every possible edge is present with probability density.
Lts randomLts(std::size_t states, std::size_t actions, const PropSet& atoms, double density, std::uint64_t seed);

// Small helpers on a seeded engine, identical on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return unit() < p; }
  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

// Seed for the i-th item of a suite.
std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t i);

}  // namespace khsat
