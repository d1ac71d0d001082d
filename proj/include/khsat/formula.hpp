#pragma once

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace khsat {

enum class Op : unsigned char { Atom, Bottom, Top, Not, Or, And, Implies, Iff, Kh, Univ, Exis };

// Atoms starting with this prefix are reserved for definition atoms.
inline constexpr std::string_view kReservedPrefix = "_k";

// Immutable, structurally shared formula tree. Copies are cheap.
class Formula {
 public:
  Formula();  // true

  static Formula atom(std::string name);
  static Formula bottom();
  static Formula top();
  static Formula negation(Formula f);
  static Formula disjunction(Formula a, Formula b);
  static Formula conjunction(Formula a, Formula b);
  static Formula implication(Formula a, Formula b);
  static Formula biconditional(Formula a, Formula b);
  static Formula kh(Formula pre, Formula post);
  static Formula universal(Formula f);
  static Formula existential(Formula f);

  Op op() const noexcept;
  const std::string& name() const;  // atoms only
  std::size_t arity() const noexcept;
  const Formula& operand(std::size_t i = 0) const;
  const Formula& pre() const { return operand(0); }
  const Formula& post() const { return operand(1); }

  // Modal depth, cached at construction.
  std::size_t depth() const noexcept;
  std::size_t size() const noexcept;
  std::size_t hash() const noexcept;

  bool isModal() const noexcept;

  friend bool operator==(const Formula& a, const Formula& b) noexcept;
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b) noexcept;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n);
  static Formula make(Op op, std::string name, std::vector<Formula> kids);
  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f.hash(); }
};

using PropSet = std::set<std::string>;

// Conjunction of a list; true for the empty list.
Formula conjoin(const std::vector<Formula>& fs);

// Rewrites into the core Atom/Bottom/Not/Or/Kh.
Formula desugar(const Formula& f);
bool isCore(const Formula& f);

std::size_t modalDepth(const Formula& f);
PropSet atoms(const Formula& f);
std::set<Formula> subformulas(const Formula& f);
// Kh/A/E occurrences, counted with repetition.
std::size_t khCount(const Formula& f);
// Depth-one Kh subformulas of desugar(f), deduplicated, in left-to-right order.
std::vector<Formula> leaves(const Formula& f);
bool hasReservedAtom(const Formula& f);
// Replace atoms by formulas.
Formula substitute(const Formula& f, const std::vector<std::pair<std::string, Formula>>& map);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string found, std::vector<std::string> expected,
             std::string detail = {});
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }
  const std::string& found() const noexcept { return found_; }

 private:
  std::size_t line_, column_;
  std::string found_;
  std::vector<std::string> expected_;
};

struct ParseOptions {
  bool allowReserved = false;
};

Formula parse(std::string_view text, ParseOptions options = {});
std::string render(const Formula& f);

// Shorthands for building formulas in code.
namespace dsl {
inline Formula atom(std::string n) { return Formula::atom(std::move(n)); }
inline Formula bot() { return Formula::bottom(); }
inline Formula top() { return Formula::top(); }
inline Formula operator~(Formula f) { return Formula::negation(std::move(f)); }
inline Formula operator&(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
inline Formula operator|(Formula a, Formula b) { return Formula::disjunction(std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return Formula::implication(std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return Formula::biconditional(std::move(a), std::move(b)); }
inline Formula Kh(Formula a, Formula b) { return Formula::kh(std::move(a), std::move(b)); }
inline Formula A(Formula f) { return Formula::universal(std::move(f)); }
inline Formula E(Formula f) { return Formula::existential(std::move(f)); }
}  // namespace dsl

}  // namespace khsat
