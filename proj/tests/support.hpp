#pragma once

// Independent reference implementations used as test oracles.

#include <functional>
#include <stdexcept>
#include <vector>

#include "khsat/formula.hpp"
#include "khsat/normalform.hpp"
#include "khsat/propsat.hpp"
#include "khsat/semantics.hpp"

namespace testkit {

using namespace khsat;

// Direct propositional evaluation; atoms missing from the assignment are false.
inline bool evalProp(const Formula& f, const Assignment& a) {
  switch (f.op()) {
    case Op::Atom: {
      auto it = a.find(f.name());
      return it != a.end() && it->second;
    }
    case Op::Bottom: return false;
    case Op::Top: return true;
    case Op::Not: return !evalProp(f.operand(), a);
    case Op::Or: return evalProp(f.operand(0), a) || evalProp(f.operand(1), a);
    case Op::And: return evalProp(f.operand(0), a) && evalProp(f.operand(1), a);
    case Op::Implies: return !evalProp(f.operand(0), a) || evalProp(f.operand(1), a);
    case Op::Iff: return evalProp(f.operand(0), a) == evalProp(f.operand(1), a);
    default: throw std::invalid_argument("evalProp: modal formula");
  }
}

// All assignments over the atoms, in lexicographic order with false before true.
inline std::vector<Assignment> allAssignments(const PropSet& atomSet) {
  std::vector<std::string> names(atomSet.begin(), atomSet.end());
  std::vector<Assignment> out;
  std::size_t n = names.size();
  for (std::size_t bits = 0; bits < (std::size_t{1} << n); ++bits) {
    Assignment a;
    // The first atom is the most significant position.
    for (std::size_t i = 0; i < n; ++i) a[names[i]] = (bits >> (n - 1 - i)) & 1U;
    out.push_back(a);
  }
  return out;
}

inline bool truthTableSat(const std::vector<Formula>& fs) {
  PropSet all;
  for (const auto& f : fs) all.merge(atoms(f));
  for (const auto& a : allAssignments(all)) {
    bool ok = true;
    for (const auto& f : fs) ok = ok && evalProp(f, a);
    if (ok) return true;
  }
  return false;
}

// Propositional entailment by truth table.
inline bool entails(const std::vector<Formula>& premises, const Formula& conclusion) {
  auto fs = premises;
  fs.push_back(Formula::negation(conclusion));
  return !truthTableSat(fs);
}

// The four-state model of the running example: a: s->t, s->v; b: t->u.
inline Lts example21() {
  Lts m(std::vector<std::string>{"s", "t", "v", "u"});
  m.addAtomAt("p", 0);
  m.addAtomAt("r", 1);
  m.addAtomAt("r", 2);
  m.addAtomAt("q", 3);
  auto a = m.addAction("a");
  auto b = m.addAction("b");
  m.addTransition(a, 0, 1);
  m.addTransition(a, 0, 2);
  m.addTransition(b, 1, 3);
  return m;
}

inline StateSet setOf(const Lts& m, std::initializer_list<const char*> names) {
  StateSet s(m.size());
  for (auto n : names) s.insert(*m.findState(n));
  return s;
}

// Adds each fresh atom with the truth set of its leaf. Leaves only mention earlier atoms,
// so evaluating in order gives every atom the global value of the subformula it replaced.
inline Lts extendWithDefinitions(Lts m, const Flattened& flat) {
  for (const auto& d : flat.defs) m.setValuation(d.atom, evalFormula(m, d.leaf));
  return m;
}

}  // namespace testkit
