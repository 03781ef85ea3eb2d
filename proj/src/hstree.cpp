#include "dynhs/hstree.hpp"

#include <algorithm>
#include <deque>

namespace dynhs {

nlohmann::json trace_to_json(const TreeTrace& trace) {
  auto out = nlohmann::json::array();
  for (const auto& e : trace) {
    nlohmann::json j = {{"node", e.node}, {"label", e.label}, {"rule", e.rule}};
    if (e.label == "conflict") {
      j["conflict"] = e.conflict.items();
      j["fresh"] = e.fresh;
    }
    out.push_back(std::move(j));
  }
  return out;
}

namespace {

struct HsNode {
  std::vector<int> edges;
  ComponentSet set;
};

}  // namespace

Collection run_hs_tree(const Dpi& dpi, const Acquired& acq, const EngineConfig& cfg, ConflictFinder& finder,
                       Counters& counters, TreeTrace* trace) {
  Ranker ranker(cfg.order, cfg.pr);
  const ComponentSet all = full_set(dpi.size());
  std::deque<HsNode> queue{HsNode{}};
  Collection ccalc;
  Collection dcalc;
  Collection labeled;  // sets already labeled by a conflict or valid

  auto record = [&](const HsNode& n, const char* label, const char* rule, const ComponentSet& c = {},
                    bool fresh = false) {
    if (trace) trace->push_back({n.edges, label, rule, c, fresh});
  };

  while (!queue.empty() && (cfg.unlimited() || static_cast<int>(dcalc.size()) < cfg.ld)) {
    HsNode node = std::move(queue.front());
    queue.pop_front();

    if (std::any_of(dcalc.begin(), dcalc.end(), [&](const ComponentSet& d) { return d.subset_of(node.set); })) {
      record(node, "closed", "L1");
      continue;
    }
    // The earlier of two set-equal nodes gets the label; the later one closes.
    if (std::find(labeled.begin(), labeled.end(), node.set) != labeled.end()) {
      record(node, "closed", "L2");
      continue;
    }

    std::optional<ComponentSet> label;
    auto reuse = std::find_if(ccalc.begin(), ccalc.end(), [&](const ComponentSet& c) { return !c.intersects(node.set); });
    if (reuse != ccalc.end()) {
      label = *reuse;
      record(node, "conflict", "L3", *label);
    } else {
      label = finder.find(all.minus(node.set), dpi, acq);
      if (!label) {
        ++counters.cc_tree;
        record(node, "valid", "L4", {}, true);
        labeled.push_back(node.set);
        dcalc.push_back(node.set);
        continue;
      }
      ++counters.fc;
      ccalc.push_back(*label);
      record(node, "conflict", "L4", *label, true);
    }
    labeled.push_back(node.set);

    for (int e : *label) {
      HsNode child{node.edges, node.set.with(e)};
      child.edges.push_back(e);
      auto pos = ranker.insert_position(queue, child.set, [](const HsNode& n) -> const ComponentSet& { return n.set; });
      queue.insert(queue.begin() + static_cast<std::ptrdiff_t>(pos), std::move(child));
    }
  }
  return dcalc;
}

}  // namespace dynhs
