#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "dynhs/component_set.hpp"
#include "dynhs/formula.hpp"
#include "dynhs/reasoner.hpp"

namespace dynhs {

using logic::Formula;

struct Dpi {
  std::vector<Formula> axioms;  // component i is axioms[i - 1]
  std::vector<Formula> background;
  std::vector<Formula> positive;
  std::vector<Formula> negative;

  int size() const { return static_cast<int>(axioms.size()); }
  std::vector<Formula> select(const ComponentSet& ids) const;
};

// Measurements gathered during a session (P', N').
struct Acquired {
  std::vector<Formula> positive;
  std::vector<Formula> negative;

  bool contains(const Formula& f) const;
  std::size_t size() const { return positive.size() + negative.size(); }
};

struct Measurement {
  Formula sentence;
  bool outcome;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Acquired add_measurement(Acquired acquired, const Measurement& m);

// True when `kept` axioms with B, P, P' are inconsistent or entail some
// n in N, N'.
bool is_faulty(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& kept);

bool is_diagnosis(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& d);
bool is_conflict(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& c);

// Exhaustive enumeration in cardinality order. Throws std::length_error when
// |O| exceeds `cap`.
Collection brute_force_min_diagnoses(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, int cap = 12);
Collection brute_force_min_conflicts(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, int cap = 12);

// B u P consistent and entailing no n in N. Throws ValidationError.
void validate(logic::Reasoner& r, const Dpi& dpi);
// validate() plus: the empty set is not a diagnosis.
void validate_for_session(logic::Reasoner& r, const Dpi& dpi);

Dpi parse_dpi(const std::string& text);
Dpi load_dpi(const std::string& path);
std::string format_dpi(const Dpi& dpi);

}  // namespace dynhs
