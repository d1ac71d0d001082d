#pragma once

#include <string>
#include <vector>

#include "khsat/formula.hpp"

namespace khsat {

struct Definition {
  std::string atom;  // fresh, reserved prefix
  Formula leaf;      // a depth-one Kh formula
};

struct Flattened {
  Formula phi0;  // propositional
  std::vector<Definition> defs;

  PropSet freshAtoms() const;
  // Conjunction of A(k <-> leaf) over defs; true when there are none.
  Formula definitionFormula() const;
  // Inverse substitution: the desugared input.
  Formula unflatten() const;
};

// Replaces leaves by fresh atoms until no modality is left, one pass per nesting level.
// Throws std::invalid_argument if f already uses the reserved prefix.
Flattened flatten(const Formula& f);

std::string freshAtom(std::size_t index);  // 1-based: _k1, _k2, ...

}  // namespace khsat
