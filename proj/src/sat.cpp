#include "dynhs/sat.hpp"

#include <cstdlib>

namespace dynhs::logic {

namespace {

class Dpll {
 public:
  Dpll(int num_vars, const std::vector<Clause>& clauses)
      : clauses_(clauses), value_(num_vars + 1, 0), occurs_(2 * (num_vars + 1)) {
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      for (int lit : clauses_[i]) occurs_[index(lit)].push_back(i);
    }
  }

  bool run() {
    for (const auto& c : clauses_) {
      if (c.empty()) return false;
      if (c.size() == 1 && !assign(c[0])) return false;
    }
    return search();
  }

 private:
  static std::size_t index(int lit) { return 2 * static_cast<std::size_t>(std::abs(lit)) + (lit < 0); }
  int lit_value(int lit) const { return lit > 0 ? value_[lit] : -value_[-lit]; }

  // Assigns `lit` true and propagates. Returns false on conflict.
  bool assign(int lit) {
    if (lit_value(lit) == 1) return true;
    if (lit_value(lit) == -1) return false;
    std::size_t head = trail_.size();
    set(lit);
    while (head < trail_.size()) {
      int falsified = -trail_[head++];
      for (std::size_t ci : occurs_[index(falsified)]) {
        int open = 0, unit = 0;
        bool sat = false;
        for (int l : clauses_[ci]) {
          int v = lit_value(l);
          if (v == 1) {
            sat = true;
            break;
          }
          if (v == 0) {
            ++open;
            unit = l;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) set(unit);
      }
    }
    return true;
  }

  void set(int lit) {
    value_[std::abs(lit)] = lit > 0 ? 1 : -1;
    trail_.push_back(lit);
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      value_[std::abs(trail_.back())] = 0;
      trail_.pop_back();
    }
  }

  bool search() {
    int branch = 0;
    std::size_t best = static_cast<std::size_t>(-1);
    for (const auto& c : clauses_) {
      std::size_t open = 0;
      int first = 0;
      bool sat = false;
      for (int l : c) {
        int v = lit_value(l);
        if (v == 1) {
          sat = true;
          break;
        }
        if (v == 0 && open++ == 0) first = l;
      }
      if (!sat && open < best) {
        best = open;
        branch = first;
      }
    }
    if (branch == 0) return true;
    for (int lit : {branch, -branch}) {
      std::size_t mark = trail_.size();
      if (assign(lit) && search()) return true;
      undo(mark);
    }
    return false;
  }

  const std::vector<Clause>& clauses_;
  std::vector<int> value_;
  std::vector<std::vector<std::size_t>> occurs_;
  std::vector<int> trail_;
};

}  // namespace

bool DpllSolver::solve(int num_vars, const std::vector<Clause>& clauses) {
  return Dpll(num_vars, clauses).run();
}

std::unique_ptr<SatSolver> make_default_solver() { return std::make_unique<DpllSolver>(); }

}  // namespace dynhs::logic
