#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dynhs/conflict_finder.hpp"
#include "dynhs/ranking.hpp"

namespace dynhs {

struct EngineConfig {
  int ld = 0;  // <= 0: no limit
  QueueOrder order = QueueOrder::kBreadthFirst;
  FaultModel pr;
  bool check_invariants = false;

  bool unlimited() const { return ld <= 0; }
};

// One labeled node, in labeling order.
struct TraceEntry {
  std::vector<int> node;       // edge labels along the branch
  std::string label;           // "conflict" | "valid" | "closed" | "nonmin"
  std::string rule;            // which check decided the label
  ComponentSet conflict;       // for "conflict"
  bool fresh = false;          // label came from a counted finder call
};

using TreeTrace = std::vector<TraceEntry>;

nlohmann::json trace_to_json(const TreeTrace& trace);

}  // namespace dynhs
