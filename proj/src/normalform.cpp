#include "khsat/normalform.hpp"

#include <stdexcept>
#include <unordered_map>

namespace khsat {

std::string freshAtom(std::size_t index) { return std::string(kReservedPrefix) + std::to_string(index); }

namespace {

Formula replaceLeaves(const Formula& f, const std::unordered_map<Formula, Formula, FormulaHash>& repl) {
  if (f.depth() == 0) return f;
  if (auto it = repl.find(f); it != repl.end()) return it->second;
  switch (f.op()) {
    case Op::Not: return Formula::negation(replaceLeaves(f.operand(), repl));
    case Op::Or: return Formula::disjunction(replaceLeaves(f.operand(0), repl), replaceLeaves(f.operand(1), repl));
    case Op::Kh: return Formula::kh(replaceLeaves(f.pre(), repl), replaceLeaves(f.post(), repl));
    default: throw std::logic_error("replaceLeaves expects a core formula");
  }
}

}  // namespace

Flattened flatten(const Formula& f) {
  if (hasReservedAtom(f))
    throw std::invalid_argument("input uses the reserved atom prefix '" + std::string(kReservedPrefix) + "'");
  Flattened out{desugar(f), {}};
  for (;;) {
    auto ls = leaves(out.phi0);
    if (ls.empty()) break;
    std::unordered_map<Formula, Formula, FormulaHash> repl;
    for (const auto& leaf : ls) {
      std::string k = freshAtom(out.defs.size() + 1);
      repl.emplace(leaf, Formula::atom(k));
      out.defs.push_back({k, leaf});
    }
    out.phi0 = replaceLeaves(out.phi0, repl);
  }
  return out;
}

PropSet Flattened::freshAtoms() const {
  PropSet out;
  for (const auto& d : defs) out.insert(d.atom);
  return out;
}

Formula Flattened::definitionFormula() const {
  std::vector<Formula> parts;
  for (const auto& d : defs)
    parts.push_back(Formula::biconditional(Formula::universal(Formula::atom(d.atom)), d.leaf));
  return conjoin(parts);
}

Formula Flattened::unflatten() const {
  // Later definitions only mention earlier atoms, so substitute from the back.
  Formula cur = phi0;
  for (auto it = defs.rbegin(); it != defs.rend(); ++it) cur = substitute(cur, {{it->atom, it->leaf}});
  return cur;
}

}  // namespace khsat
