#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <unordered_map>

#include "dynhs/cnf.hpp"
#include "dynhs/sat.hpp"

namespace dynhs::logic {

// Consistency and entailment over formula sets. Clauses are cached per
// formula. Not thread-safe; use one instance per execution context.
class Reasoner {
 public:
  Reasoner();
  explicit Reasoner(std::unique_ptr<SatSolver> solver);

  bool is_consistent(std::span<const Formula> sentences);
  bool is_consistent(std::span<const Formula> a, std::span<const Formula> b);
  bool entails(std::span<const Formula> sentences, const Formula& query);
  bool entails(std::span<const Formula> a, std::span<const Formula> b, const Formula& query);

  // Number of satisfiability checks performed so far.
  std::uint64_t checks() const { return checks_; }

 private:
  const std::vector<Clause>& clauses_of(const Formula& f);
  bool satisfiable(std::initializer_list<std::span<const Formula>> parts, const Formula* extra);

  std::unique_ptr<SatSolver> solver_;
  CnfEncoder encoder_;
  std::unordered_map<std::string, std::vector<Clause>> cache_;
  std::uint64_t checks_ = 0;
};

}  // namespace dynhs::logic
