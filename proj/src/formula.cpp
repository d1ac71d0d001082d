#include "khsat/formula.hpp"

#include <algorithm>
#include <functional>
#include <unordered_set>

namespace khsat {

struct Formula::Node {
  Op op;
  std::string name;
  std::vector<Formula> kids;
  std::size_t depth = 0;
  std::size_t size = 1;
  std::size_t hash = 0;
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

Formula::Formula() : Formula(top()) {}

Formula::Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

Formula Formula::make(Op op, std::string name, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->name = std::move(name);
  n->kids = std::move(kids);
  std::size_t h = mix(0, static_cast<std::size_t>(op));
  if (op == Op::Atom) h = mix(h, std::hash<std::string>{}(n->name));
  std::size_t d = 0;
  for (const auto& k : n->kids) {
    d = std::max(d, k.depth());
    n->size += k.size();
    h = mix(h, k.hash());
  }
  if (op == Op::Kh || op == Op::Univ || op == Op::Exis) ++d;
  n->depth = d;
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::atom(std::string name) {
  if (name.empty()) throw std::invalid_argument("atom name must not be empty");
  return make(Op::Atom, std::move(name), {});
}

Formula Formula::bottom() {
  static const Formula f = make(Op::Bottom, {}, {});
  return f;
}

Formula Formula::top() {
  static const Formula f = make(Op::Top, {}, {});
  return f;
}

Formula Formula::negation(Formula f) { return make(Op::Not, {}, {std::move(f)}); }
Formula Formula::disjunction(Formula a, Formula b) { return make(Op::Or, {}, {std::move(a), std::move(b)}); }
Formula Formula::conjunction(Formula a, Formula b) { return make(Op::And, {}, {std::move(a), std::move(b)}); }
Formula Formula::implication(Formula a, Formula b) { return make(Op::Implies, {}, {std::move(a), std::move(b)}); }
Formula Formula::biconditional(Formula a, Formula b) { return make(Op::Iff, {}, {std::move(a), std::move(b)}); }
Formula Formula::kh(Formula pre, Formula post) { return make(Op::Kh, {}, {std::move(pre), std::move(post)}); }
Formula Formula::universal(Formula f) { return make(Op::Univ, {}, {std::move(f)}); }
Formula Formula::existential(Formula f) { return make(Op::Exis, {}, {std::move(f)}); }

Op Formula::op() const noexcept { return node_->op; }

const std::string& Formula::name() const {
  if (node_->op != Op::Atom) throw std::logic_error("name() on a non-atom");
  return node_->name;
}

std::size_t Formula::arity() const noexcept { return node_->kids.size(); }

const Formula& Formula::operand(std::size_t i) const {
  if (i >= node_->kids.size()) throw std::out_of_range("formula operand index");
  return node_->kids[i];
}

std::size_t Formula::depth() const noexcept { return node_->depth; }
std::size_t Formula::size() const noexcept { return node_->size; }
std::size_t Formula::hash() const noexcept { return node_->hash; }

bool Formula::isModal() const noexcept {
  return node_->op == Op::Kh || node_->op == Op::Univ || node_->op == Op::Exis;
}

bool operator==(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->op != b.node_->op || a.node_->size != b.node_->size) return false;
  if (a.node_->name != b.node_->name) return false;
  for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
    if (!(a.node_->kids[i] == b.node_->kids[i])) return false;
  return true;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.node_->op <=> b.node_->op; c != 0) return c;
  if (auto c = a.node_->name.compare(b.node_->name); c != 0)
    return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
  for (std::size_t i = 0; i < a.node_->kids.size(); ++i)
    if (auto c = a.node_->kids[i] <=> b.node_->kids[i]; c != 0) return c;
  return std::strong_ordering::equal;
}

Formula conjoin(const std::vector<Formula>& fs) {
  if (fs.empty()) return Formula::top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = Formula::conjunction(acc, fs[i]);
  return acc;
}

Formula desugar(const Formula& f) {
  using F = Formula;
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom:
      return f;
    case Op::Top:
      return F::negation(F::bottom());
    case Op::Not:
      return F::negation(desugar(f.operand()));
    case Op::Or:
      return F::disjunction(desugar(f.operand(0)), desugar(f.operand(1)));
    case Op::And:
      return F::negation(F::disjunction(F::negation(desugar(f.operand(0))), F::negation(desugar(f.operand(1)))));
    case Op::Implies:
      return F::disjunction(F::negation(desugar(f.operand(0))), desugar(f.operand(1)));
    case Op::Iff: {
      F a = desugar(f.operand(0)), b = desugar(f.operand(1));
      F ab = F::disjunction(F::negation(a), b);
      F ba = F::disjunction(F::negation(b), a);
      return F::negation(F::disjunction(F::negation(ab), F::negation(ba)));
    }
    case Op::Kh:
      return F::kh(desugar(f.pre()), desugar(f.post()));
    case Op::Univ:
      return F::kh(F::negation(desugar(f.operand())), F::bottom());
    case Op::Exis:
      return F::negation(F::kh(F::negation(F::negation(desugar(f.operand()))), F::bottom()));
  }
  throw std::logic_error("unknown operator");
}

bool isCore(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Bottom:
      return true;
    case Op::Not:
    case Op::Or:
    case Op::Kh:
      for (std::size_t i = 0; i < f.arity(); ++i)
        if (!isCore(f.operand(i))) return false;
      return true;
    default:
      return false;
  }
}

std::size_t modalDepth(const Formula& f) { return f.depth(); }

namespace {

void collectAtoms(const Formula& f, PropSet& out) {
  if (f.op() == Op::Atom) {
    out.insert(f.name());
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collectAtoms(f.operand(i), out);
}

void collectSubformulas(const Formula& f, std::set<Formula>& out) {
  if (!out.insert(f).second) return;
  for (std::size_t i = 0; i < f.arity(); ++i) collectSubformulas(f.operand(i), out);
}

void collectLeaves(const Formula& f, std::vector<Formula>& out, std::unordered_set<Formula, FormulaHash>& seen) {
  if (f.depth() == 0) return;
  if (f.op() == Op::Kh && f.depth() == 1) {
    if (seen.insert(f).second) out.push_back(f);
    return;
  }
  for (std::size_t i = 0; i < f.arity(); ++i) collectLeaves(f.operand(i), out, seen);
}

}  // namespace

PropSet atoms(const Formula& f) {
  PropSet out;
  collectAtoms(f, out);
  return out;
}

std::set<Formula> subformulas(const Formula& f) {
  std::set<Formula> out;
  collectSubformulas(f, out);
  return out;
}

std::size_t khCount(const Formula& f) {
  std::size_t n = f.isModal() ? 1 : 0;
  for (std::size_t i = 0; i < f.arity(); ++i) n += khCount(f.operand(i));
  return n;
}

std::vector<Formula> leaves(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula, FormulaHash> seen;
  collectLeaves(isCore(f) ? f : desugar(f), out, seen);
  return out;
}

bool hasReservedAtom(const Formula& f) {
  if (f.op() == Op::Atom) return f.name().starts_with(kReservedPrefix);
  for (std::size_t i = 0; i < f.arity(); ++i)
    if (hasReservedAtom(f.operand(i))) return true;
  return false;
}

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  using F = Formula;
  switch (f.op()) {
    case Op::Not: return F::negation(kids[0]);
    case Op::Or: return F::disjunction(kids[0], kids[1]);
    case Op::And: return F::conjunction(kids[0], kids[1]);
    case Op::Implies: return F::implication(kids[0], kids[1]);
    case Op::Iff: return F::biconditional(kids[0], kids[1]);
    case Op::Kh: return F::kh(kids[0], kids[1]);
    case Op::Univ: return F::universal(kids[0]);
    case Op::Exis: return F::existential(kids[0]);
    default: return f;
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Formula>>& map) {
  if (f.op() == Op::Atom) {
    for (const auto& [name, g] : map)
      if (name == f.name()) return g;
    return f;
  }
  if (f.arity() == 0) return f;
  std::vector<Formula> kids;
  bool changed = false;
  for (std::size_t i = 0; i < f.arity(); ++i) {
    kids.push_back(substitute(f.operand(i), map));
    changed = changed || !(kids.back() == f.operand(i));
  }
  return changed ? rebuild(f, std::move(kids)) : f;
}

}  // namespace khsat
