#pragma once

#include <cstdint>
#include <optional>

#include "dynhs/engine.hpp"

namespace dynhs {

struct DynNode {
  std::vector<int> edges;
  std::vector<ComponentSet> cs;  // cs[i] labeled the node that edges[i] leaves
  std::uint64_t id = 0;

  ComponentSet set() const { return ComponentSet(edges); }
  std::string str() const;
};

struct SearchState {
  std::vector<DynNode> q;
  std::vector<DynNode> qdup;     // cardinality ascending
  std::vector<DynNode> dsupset;  // non-minimal diagnoses
  Collection ccalc;              // insertion order
  std::vector<DynNode> dcalc;    // diagnoses returned by the last run
  std::uint64_t next_id = 1;

  static SearchState initial();
};

nlohmann::json state_to_json(const SearchState& s);
SearchState state_from_json(const nlohmann::json& j);

struct RedundancyWitness {
  std::size_t position;
  ComponentSet conflict;
};

// True when X witnesses that `nd` is redundant.
bool witnesses(const ComponentSet& x, const DynNode& nd, std::size_t* position = nullptr);

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Stateful hitting-set search. Keeps its tree across run() calls; each call
// must see the acquired measurements extended by one informative
// measurement, with `dcheck`/`dtimes` partitioning the previous result.
class DynamicHs {
 public:
  DynamicHs(const Dpi& dpi, EngineConfig cfg, ConflictFinder& finder, Counters& counters,
            SearchState state = SearchState::initial());

  // Returns diagnoses in emission order.
  Collection run(const Acquired& acq, const Collection& dcheck, const Collection& dtimes);

  const SearchState& state() const { return state_; }
  const TreeTrace& trace() const { return trace_; }

  // Exposed for tests.
  std::optional<RedundancyWitness> redundant(const DynNode& nd, const Acquired& acq);
  void check_invariants() const;

 private:
  enum class Scope { kLabel, kUpdate };
  struct Store {
    std::vector<DynNode>* nodes;
    bool queue;
  };

  void update_tree(const Acquired& acq);
  std::optional<ComponentSet> label(const DynNode& node, const Acquired& acq, bool& nonmin);
  void prune(const ComponentSet& x, Scope scope);
  std::optional<DynNode> take_replacement(const DynNode& deleted, const ComponentSet& x,
                                          std::vector<std::uint64_t>& used_prefixes);
  void insert_q(DynNode node);
  void insert_qdup(DynNode node);
  void place(const Store& store, DynNode node);
  void check_after_prune(const ComponentSet& x, Scope scope) const;
  void check_node(const DynNode& nd) const;

  const Dpi& dpi_;
  EngineConfig cfg_;
  Ranker ranker_;
  ConflictFinder& finder_;
  Counters& counters_;
  SearchState state_;
  ComponentSet all_;

  // Per-run collections.
  std::vector<DynNode> dcheck_;
  std::vector<DynNode> dtimes_;
  std::vector<DynNode> dcalc_;
  Collection dcheck_sets_;
  TreeTrace trace_;
};

}  // namespace dynhs
