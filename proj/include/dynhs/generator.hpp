#pragma once

#include <random>

#include "dynhs/dpi.hpp"

namespace dynhs {

// Axioms are rules `l1 & .. & lk -> h1 | .. | hm` over random literals; N
// gets `negatives` random literals. With probability trigger_bias a rule body
// starts with the trigger atom (the first variable), and N includes its
// negation, so most rules take part in deriving it.
struct RandomDpiSpec {
  int axioms = 8;
  int vars = 5;
  int max_body = 2;
  int max_head = 2;
  int negatives = 1;
  int positives = 0;
  double trigger_bias = 0.0;
  unsigned seed = 1;
  int max_attempts = 2000;
};

std::string variable_name(int i);  // A..Z, then V26, V27, ...

// Deterministic per spec. Throws std::runtime_error when no valid DPI turns
// up within max_attempts, std::invalid_argument for a bad spec.
Dpi generate_dpi(const RandomDpiSpec& spec);

// Greedy shrink of the full set in random order; minimal under the weak
// fault model.
ComponentSet random_min_diagnosis(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, std::mt19937& rng);

}  // namespace dynhs
