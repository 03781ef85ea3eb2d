#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>

#include "dynhs/generator.hpp"
#include "dynhs/sequential.hpp"

namespace testsupport {

using namespace dynhs;

inline std::string data_path(const std::string& name) { return std::string(DYNHS_DATA_DIR) + "/" + name; }

inline Dpi paper_dpi() { return load_dpi(data_path("paper.dpi")); }

inline Formula f(const std::string& text) { return logic::parse_formula(text); }

inline Acquired acquired(std::vector<std::string> pos, std::vector<std::string> neg) {
  Acquired a;
  for (auto& p : pos) a.positive.push_back(f(p));
  for (auto& n : neg) a.negative.push_back(f(n));
  return a;
}

// Acquired sets after m1, m1+m2, m1+m2+m3 of the worked example.
inline Acquired after_m1() { return acquired({}, {"A -> C"}); }
inline Acquired after_m2() { return acquired({}, {"A -> C", "A -> !B"}); }
inline Acquired after_m3() { return acquired({"A -> !C"}, {"A -> C", "A -> !B"}); }

inline Collection sets(std::initializer_list<std::initializer_list<int>> items) {
  Collection out;
  for (auto s : items) out.push_back(ComponentSet(s));
  return canonical(out);
}

// Evaluation written against the AST only, independent of the CNF path.
inline bool eval(const Formula& g, const std::map<std::string, bool>& v) {
  auto ch = g.children();
  switch (g.op()) {
    case logic::Op::kTrue: return true;
    case logic::Op::kFalse: return false;
    case logic::Op::kVar: return v.at(g.name());
    case logic::Op::kNot: return !eval(ch[0], v);
    case logic::Op::kAnd:
      for (const auto& c : ch) {
        if (!eval(c, v)) return false;
      }
      return true;
    case logic::Op::kOr:
      for (const auto& c : ch) {
        if (eval(c, v)) return true;
      }
      return false;
    case logic::Op::kImplies: return !eval(ch[0], v) || eval(ch[1], v);
    case logic::Op::kIff: return eval(ch[0], v) == eval(ch[1], v);
  }
  return false;
}

// Truth-table satisfiability.
inline bool tt_consistent(const std::vector<Formula>& fs) {
  std::set<std::string> names;
  for (const auto& g : fs) g.collect_variables(names);
  std::vector<std::string> vars(names.begin(), names.end());
  for (unsigned long m = 0; m < (1ul << vars.size()); ++m) {
    std::map<std::string, bool> v;
    for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = (m >> i) & 1;
    bool all = true;
    for (const auto& g : fs) all = all && eval(g, v);
    if (all) return true;
  }
  return false;
}

// Minimal hitting sets by exhaustive enumeration over 1..n.
inline Collection min_hitting_sets(const Collection& family, int n) {
  Collection hs;
  for (unsigned long m = 0; m < (1ul << n); ++m) {
    std::vector<int> items;
    for (int i = 0; i < n; ++i) {
      if ((m >> i) & 1) items.push_back(i + 1);
    }
    ComponentSet x(items);
    bool hits = true;
    for (const auto& s : family) hits = hits && x.intersects(s);
    if (hits) hs.push_back(x);
  }
  Collection out;
  for (const auto& x : hs) {
    bool minimal = true;
    for (const auto& y : hs) minimal = minimal && !y.proper_subset_of(x);
    if (minimal) out.push_back(x);
  }
  return canonical(out);
}

// Finder decorator that counts invocations.
class CountingFinder : public ConflictFinder {
 public:
  explicit CountingFinder(ConflictFinder& inner) : inner_(inner) {}
  std::optional<ComponentSet> find(const ComponentSet& universe, const Dpi& dpi, const Acquired& acq) override {
    ++calls;
    return inner_.find(universe, dpi, acq);
  }
  long calls = 0;

 private:
  ConflictFinder& inner_;
};

// Small random DPIs for property suites.
inline Dpi small_dpi(unsigned seed, int min_axioms = 4, int max_axioms = 8, int max_vars = 6) {
  std::mt19937 rng(seed);
  RandomDpiSpec spec;
  spec.axioms = std::uniform_int_distribution<int>(min_axioms, max_axioms)(rng);
  spec.vars = std::uniform_int_distribution<int>(3, max_vars)(rng);
  spec.trigger_bias = std::uniform_int_distribution<int>(0, 1)(rng) ? 0.8 : 0.0;
  spec.max_body = std::uniform_int_distribution<int>(1, 2)(rng);
  spec.negatives = spec.trigger_bias > 0 ? std::uniform_int_distribution<int>(0, 1)(rng) : 1;
  spec.positives = std::uniform_int_distribution<int>(0, 1)(rng);
  spec.seed = seed;
  return generate_dpi(spec);
}

inline EngineConfig engine_cfg(int ld, QueueOrder order, FaultModel pr, bool check = true) {
  EngineConfig c;
  c.ld = ld;
  c.order = order;
  c.pr = std::move(pr);
  c.check_invariants = check;
  return c;
}

// The three transition laws for DPI_j -> DPI_j+1, from brute-force sets.
struct LawCheck {
  bool supersets = true;  // each new min diagnosis contains an old one
  bool shrink = true;     // each old min conflict contains a new one
  bool change = true;     // some conflict shrank, or a new one appeared
};

inline LawCheck check_laws(const Collection& old_d, const Collection& new_d, const Collection& old_c,
                           const Collection& new_c) {
  LawCheck out;
  for (const auto& d : new_d) {
    bool ok = false;
    for (const auto& o : old_d) ok = ok || o.subset_of(d);
    out.supersets = out.supersets && ok;
  }
  for (const auto& c : old_c) {
    bool ok = false;
    for (const auto& n : new_c) ok = ok || n.subset_of(c);
    out.shrink = out.shrink && ok;
  }
  bool shrunk = false, fresh = false;
  for (const auto& c : old_c) {
    for (const auto& n : new_c) shrunk = shrunk || n.proper_subset_of(c);
  }
  for (const auto& n : new_c) {
    bool comparable = false;
    for (const auto& c : old_c) comparable = comparable || n.subset_of(c) || c.subset_of(n);
    fresh = fresh || !comparable;
  }
  out.change = shrunk || fresh;
  return out;
}

// A random informative transition on a random small DPI, answered by a
// planted diagnosis. Returns false when the draw yields no such transition.
struct Transition {
  Dpi dpi;
  Acquired before, after;
};

inline bool random_transition(unsigned seed, Transition& t) {
  std::mt19937 rng(seed);
  t.dpi = small_dpi(seed, 4, 8, 5);
  logic::Reasoner r;
  ComponentSet actual = random_min_diagnosis(r, t.dpi, {}, rng);
  SimulatedOracle oracle(actual);
  auto pool = candidate_pool(t.dpi, 200);
  std::shuffle(pool.begin(), pool.end(), rng);
  // Walk a few measurements; the last informative one is the transition.
  Acquired acq;
  int steps = std::uniform_int_distribution<int>(1, 3)(rng);
  bool found = false;
  for (const auto& q : pool) {
    if (steps == 0) break;
    if (acq.contains(q)) continue;
    Acquired next = add_measurement(acq, {q, oracle.measure(q, t.dpi, acq)});
    auto old_d = brute_force_min_diagnoses(r, t.dpi, acq);
    bool informative = false;
    for (const auto& d : old_d) informative = informative || !is_diagnosis(r, t.dpi, next, d);
    if (!informative) continue;
    t.before = acq;
    t.after = next;
    acq = next;
    found = true;
    --steps;
  }
  return found;
}

}  // namespace testsupport
