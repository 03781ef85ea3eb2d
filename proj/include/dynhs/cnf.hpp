#pragma once

#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynhs/formula.hpp"

namespace dynhs::logic {

// DIMACS-style literal: +v / -v for variable v >= 1.
using Clause = std::vector<int>;

struct ClauseSet {
  std::vector<Clause> clauses;
  std::vector<std::string> names;  // names[v - 1]

  int num_vars() const { return static_cast<int>(names.size()); }
  std::string literal_str(int lit) const;
  std::string clause_str(const Clause& c) const;
};

// Stateful clausifier: variable ids are stable across calls, so clauses of
// separately encoded formulas can be mixed. Auxiliary variables (`$t<n>`)
// appear only when distribution would exceed `product_limit` clauses.
class CnfEncoder {
 public:
  explicit CnfEncoder(std::size_t product_limit = 32) : product_limit_(product_limit) {}

  int variable(const std::string& name);
  std::vector<Clause> encode(const Formula& f);

  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

  struct Nnf;

 private:
  int fresh();
  std::vector<Clause> clausify(const Nnf& n, std::vector<Clause>& side);

  std::size_t product_limit_;
  std::unordered_map<std::string, int> ids_;
  std::vector<std::string> names_;
  int aux_ = 0;
};

ClauseSet to_cnf(std::span<const Formula> sentences);

}  // namespace dynhs::logic
