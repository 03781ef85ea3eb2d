#include "dynhs/generator.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace dynhs {

std::string variable_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('A' + i));
  return "V" + std::to_string(i);
}

namespace {

Formula literal(std::mt19937& rng, int vars) {
  std::uniform_int_distribution<int> pick(0, vars - 1);
  Formula v = Formula::var(variable_name(pick(rng)));
  return std::bernoulli_distribution(0.5)(rng) ? Formula::negation(v) : v;
}

std::vector<Formula> literals(std::mt19937& rng, int vars, int max_count) {
  int n = std::uniform_int_distribution<int>(1, max_count)(rng);
  std::vector<Formula> out;
  for (int i = 0; i < n; ++i) out.push_back(literal(rng, vars));
  return out;
}

}  // namespace

Dpi generate_dpi(const RandomDpiSpec& spec) {
  if (spec.axioms < 1) throw std::invalid_argument("axioms must be positive");
  if (spec.vars < 1) throw std::invalid_argument("vars must be positive");
  if (spec.max_body < 1 || spec.max_head < 1) throw std::invalid_argument("body and head sizes must be positive");
  if (spec.negatives < 0 || spec.positives < 0) throw std::invalid_argument("measurement counts must be non-negative");
  if (spec.trigger_bias < 0 || spec.trigger_bias > 1) throw std::invalid_argument("trigger_bias must lie in [0, 1]");

  std::mt19937 rng(spec.seed);
  logic::Reasoner r;
  for (int attempt = 0; attempt < spec.max_attempts; ++attempt) {
    Dpi dpi;
    for (int i = 0; i < spec.axioms; ++i) {
      auto body = literals(rng, spec.vars, spec.max_body);
      if (std::bernoulli_distribution(spec.trigger_bias)(rng)) body[0] = Formula::var(variable_name(0));
      auto head = literals(rng, spec.vars, spec.max_head);
      dpi.axioms.push_back(Formula::implication(Formula::conjunction(body), Formula::disjunction(head)));
    }
    for (int i = 0; i < spec.positives; ++i) dpi.positive.push_back(literal(rng, spec.vars));
    if (spec.trigger_bias > 0) dpi.negative.push_back(Formula::negation(Formula::var(variable_name(0))));
    for (int i = 0; i < spec.negatives; ++i) dpi.negative.push_back(literal(rng, spec.vars));
    try {
      validate_for_session(r, dpi);
      return dpi;
    } catch (const ValidationError&) {
    }
  }
  throw std::runtime_error("no valid DPI after " + std::to_string(spec.max_attempts) + " attempts");
}

ComponentSet random_min_diagnosis(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, std::mt19937& rng) {
  std::vector<int> order(dpi.size());
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  ComponentSet d = full_set(dpi.size());
  for (int i : order) {
    ComponentSet smaller = d.minus(ComponentSet({i}));
    if (is_diagnosis(r, dpi, acq, smaller)) d = smaller;
  }
  return d;
}

}  // namespace dynhs
