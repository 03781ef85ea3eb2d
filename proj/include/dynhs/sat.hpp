#pragma once

#include <memory>
#include <vector>

#include "dynhs/cnf.hpp"

namespace dynhs::logic {

class SatSolver {
 public:
  virtual ~SatSolver() = default;
  // Variables are 1..num_vars. Returns true iff satisfiable.
  virtual bool solve(int num_vars, const std::vector<Clause>& clauses) = 0;
};

// Plain DPLL: unit propagation over occurrence lists, chronological
// backtracking, branching on a literal of a shortest open clause.
class DpllSolver : public SatSolver {
 public:
  bool solve(int num_vars, const std::vector<Clause>& clauses) override;
};

std::unique_ptr<SatSolver> make_default_solver();

}  // namespace dynhs::logic
