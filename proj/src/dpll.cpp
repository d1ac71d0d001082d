#include <algorithm>
#include <cstdlib>

#include "khsat/propsat.hpp"

namespace khsat {

namespace {

// Chronological-backtracking DPLL with two watched literals.
class Dpll {
 public:
  explicit Dpll(const CnfInstance& cnf) : n_(cnf.varCount), value_(n_ + 1, -1), watches_(2 * (n_ + 1)) {
    for (const auto& c : cnf.clauses) {
      Clause norm = c;
      std::sort(norm.begin(), norm.end());
      norm.erase(std::unique(norm.begin(), norm.end()), norm.end());
      bool tautology = false;
      for (std::size_t i = 0; i + 1 < norm.size(); ++i)
        for (std::size_t j = i + 1; j < norm.size(); ++j)
          if (norm[i] == -norm[j]) tautology = true;
      if (tautology) continue;
      if (norm.empty()) {
        trivialConflict_ = true;
      } else if (norm.size() == 1) {
        units_.push_back(norm[0]);
      } else {
        watches_[slot(norm[0])].push_back(clauses_.size());
        watches_[slot(norm[1])].push_back(clauses_.size());
        clauses_.push_back(std::move(norm));
      }
    }
  }

  std::optional<std::vector<bool>> run() {
    if (trivialConflict_) return std::nullopt;
    for (int u : units_) {
      int v = valueOf(u);
      if (v == 0) return std::nullopt;
      if (v < 0) assign(u);
    }
    for (;;) {
      if (!propagate()) {
        if (!backtrack()) return std::nullopt;
        continue;
      }
      int var = 0;
      for (int v = 1; v <= n_; ++v) {
        if (value_[v] < 0) {
          var = v;
          break;
        }
      }
      if (var == 0) {
        std::vector<bool> model(n_ + 1, false);
        for (int v = 1; v <= n_; ++v) model[v] = value_[v] == 1;
        return model;
      }
      levels_.push_back({trail_.size(), var, false});
      assign(-var);
    }
  }

 private:
  struct Level {
    std::size_t trailStart;
    int var;
    bool flipped;
  };

  static std::size_t slot(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0 ? 1 : 0); }

  // 1 true, 0 false, -1 unassigned.
  int valueOf(int lit) const {
    int v = value_[std::abs(lit)];
    if (v < 0) return -1;
    return (lit > 0) == (v == 1) ? 1 : 0;
  }

  void assign(int lit) {
    value_[std::abs(lit)] = lit > 0 ? 1 : 0;
    trail_.push_back(lit);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      int falseLit = -trail_[head_++];
      auto& ws = watches_[slot(falseLit)];
      std::size_t keep = 0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        std::size_t ci = ws[i];
        Clause& c = clauses_[ci];
        if (c[0] == falseLit) std::swap(c[0], c[1]);
        if (valueOf(c[0]) == 1) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (valueOf(c[k]) != 0) {
            std::swap(c[1], c[k]);
            watches_[slot(c[1])].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (valueOf(c[0]) == 0) {
          for (std::size_t j = i + 1; j < ws.size(); ++j) ws[keep++] = ws[j];
          ws.resize(keep);
          return false;
        }
        assign(c[0]);
      }
      ws.resize(keep);
    }
    return true;
  }

  bool backtrack() {
    while (!levels_.empty()) {
      Level l = levels_.back();
      levels_.pop_back();
      while (trail_.size() > l.trailStart) {
        value_[std::abs(trail_.back())] = -1;
        trail_.pop_back();
      }
      head_ = trail_.size();
      if (!l.flipped) {
        levels_.push_back({trail_.size(), l.var, true});
        assign(l.var);
        return true;
      }
    }
    return false;
  }

  int n_;
  std::vector<int> value_;
  std::vector<Clause> clauses_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<int> units_;
  std::vector<int> trail_;
  std::vector<Level> levels_;
  std::size_t head_ = 0;
  bool trivialConflict_ = false;
};

}  // namespace

std::optional<std::vector<bool>> solveCnf(const CnfInstance& cnf) { return Dpll(cnf).run(); }

}  // namespace khsat
