#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dynhs/dpi.hpp"

namespace dynhs {

// Expensive-operation ledger of one engine run or session.
struct Counters {
  long fc = 0;          // tree-internal finder calls that returned a conflict
  long rd = 0;          // redundant() invocations
  long cc_tree = 0;     // tree-internal finder calls that returned 'no conflict'
  long cc_session = 0;  // validity checks done by assignDiagsOkNok

  Counters& operator+=(const Counters& o) {
    fc += o.fc;
    rd += o.rd;
    cc_tree += o.cc_tree;
    cc_session += o.cc_session;
    return *this;
  }
  friend Counters operator-(Counters a, const Counters& b) {
    a.fc -= b.fc;
    a.rd -= b.rd;
    a.cc_tree -= b.cc_tree;
    a.cc_session -= b.cc_session;
    return a;
  }
  friend bool operator==(const Counters&, const Counters&) = default;
};

class ConflictFinder {
 public:
  virtual ~ConflictFinder() = default;
  // A minimal conflict within `universe`, or nullopt for 'no conflict'.
  virtual std::optional<ComponentSet> find(const ComponentSet& universe, const Dpi& dpi, const Acquired& acq) = 0;
};

// Divide-and-conquer search over positions 0..n-1 in ascending order.
// `faulty` must be upward closed. Returns nullopt when the full range is
// not faulty.
std::optional<std::vector<std::size_t>> quick_xplain(
    std::size_t n, const std::function<bool(const std::vector<std::size_t>&)>& faulty);

// Formula-level variant: a set is faulty when background plus the chosen
// candidates is inconsistent or entails one of `negatives`.
std::optional<std::vector<std::size_t>> quick_xplain(logic::Reasoner& r, std::span<const Formula> background,
                                                     std::span<const Formula> candidates,
                                                     std::span<const Formula> negatives);

class QuickXplainFinder : public ConflictFinder {
 public:
  explicit QuickXplainFinder(logic::Reasoner& r) : reasoner_(r) {}
  std::optional<ComponentSet> find(const ComponentSet& universe, const Dpi& dpi, const Acquired& acq) override;

 private:
  logic::Reasoner& reasoner_;
};

struct ScriptEntry {
  ComponentSet universe;
  std::vector<Formula> n_prime;
  std::vector<Formula> p_prime;
  std::optional<ComponentSet> result;
};

// Answers from a fixed script where an entry matches (universe and acquired
// measurements, as sets), otherwise delegates to the fallback. Every scripted
// answer is checked before use; a wrong one throws std::logic_error.
class ScriptedFinder : public ConflictFinder {
 public:
  ScriptedFinder(logic::Reasoner& r, std::vector<ScriptEntry> script, std::shared_ptr<ConflictFinder> fallback);
  std::optional<ComponentSet> find(const ComponentSet& universe, const Dpi& dpi, const Acquired& acq) override;

  std::size_t hits() const { return hits_; }

 private:
  void check(const ScriptEntry& e, const Dpi& dpi, const Acquired& acq);

  logic::Reasoner& reasoner_;
  std::vector<ScriptEntry> script_;
  std::vector<bool> checked_;
  std::shared_ptr<ConflictFinder> fallback_;
  std::size_t hits_ = 0;
};

std::vector<ScriptEntry> parse_conflict_script(const std::string& json_text);
std::vector<ScriptEntry> load_conflict_script(const std::string& path);

bool is_minimal_conflict(logic::Reasoner& r, const Dpi& dpi, const Acquired& acq, const ComponentSet& c);

}  // namespace dynhs
