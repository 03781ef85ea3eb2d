#include "dynhs/reasoner.hpp"

namespace dynhs::logic {

Reasoner::Reasoner() : Reasoner(make_default_solver()) {}

Reasoner::Reasoner(std::unique_ptr<SatSolver> solver) : solver_(std::move(solver)) {}

const std::vector<Clause>& Reasoner::clauses_of(const Formula& f) {
  auto it = cache_.find(f.key());
  if (it == cache_.end()) it = cache_.emplace(f.key(), encoder_.encode(f)).first;
  return it->second;
}

bool Reasoner::satisfiable(std::initializer_list<std::span<const Formula>> parts, const Formula* extra) {
  ++checks_;
  std::vector<Clause> all;
  for (auto part : parts) {
    for (const auto& f : part) {
      const auto& cs = clauses_of(f);
      all.insert(all.end(), cs.begin(), cs.end());
    }
  }
  if (extra) {
    const auto& cs = clauses_of(*extra);
    all.insert(all.end(), cs.begin(), cs.end());
  }
  return solver_->solve(encoder_.num_vars(), all);
}

bool Reasoner::is_consistent(std::span<const Formula> sentences) { return satisfiable({sentences}, nullptr); }

bool Reasoner::is_consistent(std::span<const Formula> a, std::span<const Formula> b) {
  return satisfiable({a, b}, nullptr);
}

bool Reasoner::entails(std::span<const Formula> sentences, const Formula& query) {
  Formula negated = Formula::negation(query);
  return !satisfiable({sentences}, &negated);
}

bool Reasoner::entails(std::span<const Formula> a, std::span<const Formula> b, const Formula& query) {
  Formula negated = Formula::negation(query);
  return !satisfiable({a, b}, &negated);
}

}  // namespace dynhs::logic
