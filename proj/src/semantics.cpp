#include "khsat/semantics.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <sstream>
#include <unordered_map>

namespace khsat {

// ---- StateSet

StateSet::StateSet(std::size_t universe, bool full) : universe_(universe) {
  if (universe_ > 64) big_.assign((universe_ + 63) / 64, 0);
  if (full) {
    for (auto& w : words()) w = ~std::uint64_t{0};
    trim();
  }
}

std::span<std::uint64_t> StateSet::words() noexcept {
  if (universe_ <= 64) return {&small_, 1};
  return big_;
}

std::span<const std::uint64_t> StateSet::words() const noexcept {
  if (universe_ <= 64) return {&small_, 1};
  return big_;
}

void StateSet::trim() noexcept {
  std::size_t rem = universe_ & 63;
  auto w = words();
  if (universe_ == 0) {
    w[0] = 0;
  } else if (rem) {
    w[w.size() - 1] &= (std::uint64_t{1} << rem) - 1;
  }
}

void StateSet::clear() noexcept {
  for (auto& w : words()) w = 0;
}

bool StateSet::empty() const noexcept {
  for (auto w : words())
    if (w) return false;
  return true;
}

std::size_t StateSet::count() const noexcept {
  std::size_t n = 0;
  for (auto w : words()) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool StateSet::isSubsetOf(const StateSet& o) const noexcept {
  auto a = words();
  auto b = o.words();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & ~b[i]) return false;
  return true;
}

std::vector<StateId> StateSet::members() const {
  std::vector<StateId> out;
  forEach([&](StateId s) { out.push_back(s); });
  return out;
}

StateSet StateSet::complement() const {
  StateSet r(universe_, true);
  r -= *this;
  return r;
}

StateSet& StateSet::operator|=(const StateSet& o) noexcept {
  auto a = words();
  auto b = o.words();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] |= b[i];
  return *this;
}

StateSet& StateSet::operator&=(const StateSet& o) noexcept {
  auto a = words();
  auto b = o.words();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] &= b[i];
  return *this;
}

StateSet& StateSet::operator-=(const StateSet& o) noexcept {
  auto a = words();
  auto b = o.words();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] &= ~b[i];
  return *this;
}

bool operator==(const StateSet& a, const StateSet& b) noexcept {
  if (a.universe_ != b.universe_) return false;
  auto x = a.words(), y = b.words();
  return std::equal(x.begin(), x.end(), y.begin());
}

std::size_t StateSet::hash() const noexcept {
  std::size_t h = universe_;
  for (auto w : words()) h = h * 0x100000001b3ULL ^ (w + 0x9e3779b97f4a7c15ULL + (h << 6));
  return h;
}

// ---- Lts

Lts::Lts(std::size_t states) : empty_(states) {
  names_.reserve(states);
  for (std::size_t i = 0; i < states; ++i) names_.push_back("s" + std::to_string(i));
}

Lts::Lts(std::vector<std::string> stateNames) : names_(std::move(stateNames)), empty_(names_.size()) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j]) throw ModelError("duplicate state '" + names_[i] + "'");
}

std::optional<StateId> Lts::findState(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t Lts::addAction(std::string name) {
  if (findAction(name)) throw ModelError("duplicate action '" + name + "'");
  actions_.push_back(std::move(name));
  succ_.emplace_back(size(), StateSet(size()));
  dom_.emplace_back(size());
  return actions_.size() - 1;
}

std::optional<std::size_t> Lts::findAction(std::string_view name) const {
  for (std::size_t i = 0; i < actions_.size(); ++i)
    if (actions_[i] == name) return i;
  return std::nullopt;
}

std::size_t Lts::requireAction(std::string_view name) const {
  auto a = findAction(name);
  if (!a) throw ModelError("unknown action '" + std::string(name) + "'");
  return *a;
}

void Lts::addTransition(std::size_t action, StateId from, StateId to) {
  succ_.at(action).at(from).insert(to);
  dom_[action].insert(from);
}

void Lts::setSuccessors(std::size_t action, StateId from, const StateSet& to) {
  succ_.at(action).at(from) = to;
  if (to.empty()) {
    dom_[action].erase(from);
  } else {
    dom_[action].insert(from);
  }
}

StateSet Lts::image(std::size_t action, const StateSet& from) const {
  StateSet out(size());
  const auto& row = succ_[action];
  from.forEach([&](StateId s) { out |= row[s]; });
  return out;
}

std::vector<std::pair<StateId, StateId>> Lts::transitions(std::size_t action) const {
  std::vector<std::pair<StateId, StateId>> out;
  for (StateId s = 0; s < size(); ++s) succ_[action][s].forEach([&](StateId t) { out.emplace_back(s, t); });
  return out;
}

void Lts::setValuation(const std::string& atom, StateSet states) {
  if (states.universe() != size()) throw ModelError("valuation for '" + atom + "' has the wrong universe");
  val_[atom] = std::move(states);
}

void Lts::addAtomAt(const std::string& atom, StateId s) {
  auto it = val_.find(atom);
  if (it == val_.end()) it = val_.emplace(atom, StateSet(size())).first;
  it->second.insert(s);
}

const StateSet& Lts::valuation(std::string_view atom) const {
  auto it = val_.find(atom);
  return it == val_.end() ? empty_ : it->second;
}

PropSet Lts::atomsAt(StateId s) const {
  PropSet out;
  for (const auto& [a, set] : val_)
    if (set.contains(s)) out.insert(a);
  return out;
}

// ---- Plans

std::string Plan::toString() const {
  if (actions.empty()) return "eps";
  std::string out;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i) out += ' ';
    out += actions[i];
  }
  return out;
}

Plan Plan::fromString(std::string_view text) {
  Plan p;
  std::istringstream in{std::string(text)};
  std::string word;
  while (in >> word)
    if (word != "eps") p.actions.push_back(word);
  return p;
}

StateSet planImage(const Lts& m, const Plan& plan, const StateSet& from) {
  StateSet cur = from;
  for (const auto& a : plan.actions) cur = m.image(m.requireAction(a), cur);
  return cur;
}

StateSet stronglyExecutable(const Lts& m, const Plan& plan) {
  // Computed backwards: SE(a.rest) = {s in dom(a) : R_a(s) within SE(rest)}.
  std::vector<std::size_t> ids;
  for (const auto& a : plan.actions) ids.push_back(m.requireAction(a));
  StateSet se = m.all();
  for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
    StateSet next(m.size());
    m.domain(*it).forEach([&](StateId s) {
      if (m.successors(*it, s).isSubsetOf(se)) next.insert(s);
    });
    se = std::move(next);
  }
  return se;
}

namespace {

struct SearchNode {
  StateSet set;
  std::size_t parent;
  std::size_t action;
};

// Breadth-first search over reachable subsets. Returns the index of the goal node, or npos.
std::size_t searchPlan(const Lts& m, const StateSet& pre, const StateSet& post, std::vector<SearchNode>& nodes) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  nodes.clear();
  nodes.push_back({pre, npos, npos});
  if (pre.isSubsetOf(post)) return 0;
  std::unordered_map<StateSet, std::size_t, StateSetHash> seen;
  seen.emplace(pre, 0);
  for (std::size_t head = 0; head < nodes.size(); ++head) {
    for (std::size_t a = 0; a < m.actionCount(); ++a) {
      if (!nodes[head].set.isSubsetOf(m.domain(a))) continue;
      StateSet next = m.image(a, nodes[head].set);
      if (seen.count(next)) continue;
      seen.emplace(next, nodes.size());
      bool goal = next.isSubsetOf(post);
      nodes.push_back({std::move(next), head, a});
      if (goal) return nodes.size() - 1;
    }
  }
  return npos;
}

}  // namespace

std::optional<Plan> hasWitnessPlan(const Lts& m, const StateSet& pre, const StateSet& post) {
  std::vector<SearchNode> nodes;
  std::size_t goal = searchPlan(m, pre, post, nodes);
  if (goal == static_cast<std::size_t>(-1)) return std::nullopt;
  Plan p;
  for (std::size_t i = goal; nodes[i].parent != static_cast<std::size_t>(-1); i = nodes[i].parent)
    p.actions.push_back(m.actionName(nodes[i].action));
  std::reverse(p.actions.begin(), p.actions.end());
  return p;
}

namespace {

bool witnessExists(const Lts& m, const StateSet& pre, const StateSet& post) {
  if (pre.isSubsetOf(post)) return true;
  std::vector<SearchNode> nodes;
  return searchPlan(m, pre, post, nodes) != static_cast<std::size_t>(-1);
}

StateSet globalOf(const Lts& m, bool holds) { return holds ? m.all() : m.none(); }

}  // namespace

StateSet evalFormula(const Lts& m, const Formula& f) {
  switch (f.op()) {
    case Op::Atom: return m.valuation(f.name());
    case Op::Bottom: return m.none();
    case Op::Top: return m.all();
    case Op::Not: return evalFormula(m, f.operand()).complement();
    case Op::Or: return evalFormula(m, f.operand(0)) | evalFormula(m, f.operand(1));
    case Op::And: return evalFormula(m, f.operand(0)) & evalFormula(m, f.operand(1));
    case Op::Implies: return evalFormula(m, f.operand(0)).complement() | evalFormula(m, f.operand(1));
    case Op::Iff: {
      StateSet a = evalFormula(m, f.operand(0)), b = evalFormula(m, f.operand(1));
      return (a & b) | (a.complement() & b.complement());
    }
    case Op::Kh: return globalOf(m, witnessExists(m, evalFormula(m, f.pre()), evalFormula(m, f.post())));
    case Op::Univ: return globalOf(m, witnessExists(m, evalFormula(m, f.operand()).complement(), m.none()));
    case Op::Exis: return globalOf(m, !witnessExists(m, evalFormula(m, f.operand()), m.none()));
  }
  throw std::logic_error("unknown operator");
}

namespace {

void collectTopLevel(const Lts& m, const Formula& f, std::vector<KhWitness>& out) {
  switch (f.op()) {
    case Op::Kh:
      out.push_back({f, hasWitnessPlan(m, evalFormula(m, f.pre()), evalFormula(m, f.post()))});
      return;
    case Op::Univ:
      out.push_back({f, hasWitnessPlan(m, evalFormula(m, f.operand()).complement(), m.none())});
      return;
    case Op::Exis:
      // E f is the negation of Kh(~~f, false); the reported plan is for the inner Kh.
      out.push_back({f, hasWitnessPlan(m, evalFormula(m, f.operand()), m.none())});
      return;
    default:
      for (std::size_t i = 0; i < f.arity(); ++i) collectTopLevel(m, f.operand(i), out);
  }
}

}  // namespace

std::vector<KhWitness> topLevelWitnesses(const Lts& m, const Formula& f) {
  std::vector<KhWitness> out;
  collectTopLevel(m, f, out);
  return out;
}

}  // namespace khsat
