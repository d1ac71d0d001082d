#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "khsat/formula.hpp"

namespace khsat {

using StateId = std::size_t;

// Subset of a fixed universe {0..n-1}. Universes up to 64 states need no heap storage.
class StateSet {
 public:
  StateSet() = default;
  explicit StateSet(std::size_t universe, bool full = false);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(StateId s) const noexcept { return (words()[s >> 6] >> (s & 63)) & 1U; }
  void insert(StateId s) noexcept { words()[s >> 6] |= std::uint64_t{1} << (s & 63); }
  void erase(StateId s) noexcept { words()[s >> 6] &= ~(std::uint64_t{1} << (s & 63)); }
  void clear() noexcept;

  bool empty() const noexcept;
  std::size_t count() const noexcept;
  bool isSubsetOf(const StateSet& o) const noexcept;
  std::vector<StateId> members() const;
  StateSet complement() const;

  StateSet& operator|=(const StateSet& o) noexcept;
  StateSet& operator&=(const StateSet& o) noexcept;
  StateSet& operator-=(const StateSet& o) noexcept;
  friend StateSet operator|(StateSet a, const StateSet& b) { return a |= b; }
  friend StateSet operator&(StateSet a, const StateSet& b) { return a &= b; }
  friend StateSet operator-(StateSet a, const StateSet& b) { return a -= b; }
  friend bool operator==(const StateSet& a, const StateSet& b) noexcept;

  std::size_t hash() const noexcept;

  template <class F>
  void forEach(F&& fn) const {
    auto w = words();
    for (std::size_t i = 0; i < w.size(); ++i) {
      std::uint64_t bits = w[i];
      while (bits) {
        fn(static_cast<StateId>(i * 64 + static_cast<std::size_t>(__builtin_ctzll(bits))));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::span<std::uint64_t> words() noexcept;
  std::span<const std::uint64_t> words() const noexcept;
  void trim() noexcept;

  std::size_t universe_ = 0;
  std::uint64_t small_ = 0;
  std::vector<std::uint64_t> big_;
};

struct StateSetHash {
  std::size_t operator()(const StateSet& s) const noexcept { return s.hash(); }
};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Labelled transition system with a valuation. Actions keep their declaration order.
class Lts {
 public:
  explicit Lts(std::size_t states = 0);
  explicit Lts(std::vector<std::string> stateNames);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& stateName(StateId s) const { return names_.at(s); }
  std::optional<StateId> findState(std::string_view name) const;

  std::size_t addAction(std::string name);
  std::size_t actionCount() const noexcept { return actions_.size(); }
  const std::string& actionName(std::size_t a) const { return actions_.at(a); }
  std::optional<std::size_t> findAction(std::string_view name) const;
  std::size_t requireAction(std::string_view name) const;

  void addTransition(std::size_t action, StateId from, StateId to);
  void setSuccessors(std::size_t action, StateId from, const StateSet& to);
  const StateSet& successors(std::size_t action, StateId from) const { return succ_[action][from]; }
  // States with at least one successor.
  const StateSet& domain(std::size_t action) const { return dom_[action]; }
  StateSet image(std::size_t action, const StateSet& from) const;
  std::vector<std::pair<StateId, StateId>> transitions(std::size_t action) const;

  void setValuation(const std::string& atom, StateSet states);
  void addAtomAt(const std::string& atom, StateId s);
  // Atoms absent from the valuation hold nowhere.
  const StateSet& valuation(std::string_view atom) const;
  const std::map<std::string, StateSet, std::less<>>& valuations() const noexcept { return val_; }
  PropSet atomsAt(StateId s) const;

  StateSet all() const { return StateSet(size(), true); }
  StateSet none() const { return StateSet(size()); }

 private:
  std::vector<std::string> names_;
  std::vector<std::string> actions_;
  std::vector<std::vector<StateSet>> succ_;
  std::vector<StateSet> dom_;
  std::map<std::string, StateSet, std::less<>> val_;
  StateSet empty_;
};

// Sequence of action names; empty is the empty plan.
struct Plan {
  std::vector<std::string> actions;

  bool empty() const noexcept { return actions.empty(); }
  std::size_t size() const noexcept { return actions.size(); }
  std::string toString() const;
  static Plan fromString(std::string_view text);
  friend bool operator==(const Plan&, const Plan&) = default;
};

StateSet planImage(const Lts& m, const Plan& plan, const StateSet& from);
StateSet stronglyExecutable(const Lts& m, const Plan& plan);
// Shortest plan strongly executable on every pre-state whose image lands in post.
std::optional<Plan> hasWitnessPlan(const Lts& m, const StateSet& pre, const StateSet& post);
StateSet evalFormula(const Lts& m, const Formula& f);

struct KhWitness {
  Formula formula;  // as written in the input
  std::optional<Plan> plan;
};
// Kh, A and E subformulas not nested under another modality, with their witnesses.
std::vector<KhWitness> topLevelWitnesses(const Lts& m, const Formula& f);

}  // namespace khsat
