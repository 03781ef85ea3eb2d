#include "dynhs/dynamic_hs.hpp"

#include <algorithm>
#include <set>

namespace dynhs {

std::string DynNode::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(edges[i]);
  }
  out += "] cs=[";
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (i) out += ",";
    out += cs[i].conflict_str();
  }
  return out + "]";
}

SearchState SearchState::initial() {
  SearchState s;
  s.q.push_back(DynNode{{}, {}, 1});
  s.next_id = 2;
  return s;
}

namespace {

nlohmann::json node_to_json(const DynNode& n) {
  auto cs = nlohmann::json::array();
  for (const auto& c : n.cs) cs.push_back(c.items());
  return {{"edges", n.edges}, {"cs", cs}, {"id", n.id}};
}

DynNode node_from_json(const nlohmann::json& j) {
  DynNode n;
  n.edges = j.at("edges").get<std::vector<int>>();
  for (const auto& c : j.at("cs")) n.cs.emplace_back(c.get<std::vector<int>>());
  n.id = j.at("id").get<std::uint64_t>();
  return n;
}

nlohmann::json nodes_to_json(const std::vector<DynNode>& nodes) {
  auto out = nlohmann::json::array();
  for (const auto& n : nodes) out.push_back(node_to_json(n));
  return out;
}

std::vector<DynNode> nodes_from_json(const nlohmann::json& j) {
  std::vector<DynNode> out;
  for (const auto& n : j) out.push_back(node_from_json(n));
  return out;
}

// Replaces labels that are proper supersets of X, where the edge stays in X.
void relabel(DynNode& nd, const ComponentSet& x) {
  for (std::size_t i = 0; i < nd.cs.size(); ++i) {
    if (x.proper_subset_of(nd.cs[i]) && x.contains(nd.edges[i])) nd.cs[i] = x;
  }
}

bool contains_set(const Collection& sets, const ComponentSet& s) {
  return std::find(sets.begin(), sets.end(), s) != sets.end();
}

}  // namespace

nlohmann::json state_to_json(const SearchState& s) {
  auto ccalc = nlohmann::json::array();
  for (const auto& c : s.ccalc) ccalc.push_back(c.items());
  return {{"q", nodes_to_json(s.q)},           {"qdup", nodes_to_json(s.qdup)},
          {"dsupset", nodes_to_json(s.dsupset)}, {"ccalc", ccalc},
          {"dcalc", nodes_to_json(s.dcalc)},     {"next_id", s.next_id}};
}

SearchState state_from_json(const nlohmann::json& j) {
  SearchState s;
  s.q = nodes_from_json(j.at("q"));
  s.qdup = nodes_from_json(j.at("qdup"));
  s.dsupset = nodes_from_json(j.at("dsupset"));
  for (const auto& c : j.at("ccalc")) s.ccalc.emplace_back(c.get<std::vector<int>>());
  s.dcalc = nodes_from_json(j.at("dcalc"));
  s.next_id = j.at("next_id").get<std::uint64_t>();
  return s;
}

bool witnesses(const ComponentSet& x, const DynNode& nd, std::size_t* position) {
  for (std::size_t j = 0; j < nd.cs.size(); ++j) {
    if (x.proper_subset_of(nd.cs[j]) && !x.contains(nd.edges[j])) {
      if (position) *position = j;
      return true;
    }
  }
  return false;
}

DynamicHs::DynamicHs(const Dpi& dpi, EngineConfig cfg, ConflictFinder& finder, Counters& counters, SearchState state)
    : dpi_(dpi),
      cfg_(std::move(cfg)),
      ranker_(cfg_.order, cfg_.pr),
      finder_(finder),
      counters_(counters),
      state_(std::move(state)),
      all_(full_set(dpi.size())) {}

Collection DynamicHs::run(const Acquired& acq, const Collection& dcheck, const Collection& dtimes) {
  dcheck_.clear();
  dtimes_.clear();
  dcalc_.clear();
  trace_.clear();
  for (auto& nd : state_.dcalc) {
    ComponentSet s = nd.set();
    if (contains_set(dcheck, s)) dcheck_.push_back(std::move(nd));
    else if (contains_set(dtimes, s)) dtimes_.push_back(std::move(nd));
    else throw std::invalid_argument("previous diagnosis " + s.diag_str() + " is in neither partition");
  }
  state_.dcalc.clear();
  dcheck_sets_ = dcheck;

  update_tree(acq);
  if (cfg_.check_invariants) check_invariants();

  while (!state_.q.empty() && (cfg_.unlimited() || static_cast<int>(dcalc_.size()) < cfg_.ld)) {
    DynNode node = std::move(state_.q.front());
    state_.q.erase(state_.q.begin());
    ComponentSet set = node.set();

    std::optional<ComponentSet> label;
    bool nonmin = false;
    if (contains_set(dcheck_sets_, set)) {
      trace_.push_back({node.edges, "valid", "known", {}, false});
    } else {
      label = this->label(node, acq, nonmin);
    }

    if (nonmin) {
      state_.dsupset.push_back(std::move(node));
    } else if (!label) {
      dcalc_.push_back(std::move(node));
    } else {
      for (int e : *label) {
        DynNode child{node.edges, node.cs, state_.next_id++};
        child.edges.push_back(e);
        child.cs.push_back(*label);
        insert_q(std::move(child));
      }
    }
    if (cfg_.check_invariants) check_invariants();
  }

  state_.dcalc = dcalc_;
  Collection out;
  for (const auto& nd : dcalc_) out.push_back(nd.set());
  return out;
}

std::optional<ComponentSet> DynamicHs::label(const DynNode& node, const Acquired& acq, bool& nonmin) {
  ComponentSet set = node.set();
  for (const auto& nd : dcalc_) {
    if (nd.set().proper_subset_of(set)) {
      nonmin = true;
      trace_.push_back({node.edges, "nonmin", "L1", {}, false});
      return std::nullopt;
    }
  }
  const Collection reuse = state_.ccalc;
  for (const auto& c : reuse) {
    if (c.intersects(set)) continue;
    auto x = finder_.find(c, dpi_, acq);
    if (!x) throw std::logic_error("stored conflict " + c.conflict_str() + " is no longer a conflict");
    ++counters_.fc;
    if (*x == c) {
      trace_.push_back({node.edges, "conflict", "reuse", c, true});
      return c;
    }
    prune(*x, Scope::kLabel);
    trace_.push_back({node.edges, "conflict", "reuse-shrunk", *x, true});
    return x;
  }
  auto l = finder_.find(all_.minus(set), dpi_, acq);
  if (!l) {
    ++counters_.cc_tree;
    trace_.push_back({node.edges, "valid", "L4", {}, true});
    return std::nullopt;
  }
  ++counters_.fc;
  if (!contains_set(state_.ccalc, *l)) state_.ccalc.push_back(*l);
  trace_.push_back({node.edges, "conflict", "L4", *l, true});
  return l;
}

std::optional<RedundancyWitness> DynamicHs::redundant(const DynNode& nd, const Acquired& acq) {
  ++counters_.rd;
  for (std::size_t j = 0; j < nd.cs.size(); ++j) {
    auto x = finder_.find(nd.cs[j], dpi_, acq);
    if (x && x->proper_subset_of(nd.cs[j]) && !x->contains(nd.edges[j])) return RedundancyWitness{j, *x};
  }
  return std::nullopt;
}

void DynamicHs::update_tree(const Acquired& acq) {
  std::set<std::uint64_t> processed;
  while (true) {
    auto it = std::find_if(dtimes_.begin(), dtimes_.end(), [&](const DynNode& n) { return !processed.count(n.id); });
    if (it == dtimes_.end()) break;
    processed.insert(it->id);
    DynNode nd = *it;
    if (auto w = redundant(nd, acq)) prune(w->conflict, Scope::kUpdate);
  }
  for (auto& nd : dtimes_) insert_q(std::move(nd));
  dtimes_.clear();

  std::vector<DynNode> keep;
  for (auto& nd : state_.dsupset) {
    ComponentSet s = nd.set();
    bool nonmin = std::any_of(dcheck_.begin(), dcheck_.end(),
                              [&](const DynNode& d) { return d.set().proper_subset_of(s); });
    if (nonmin) keep.push_back(std::move(nd));
    else insert_q(std::move(nd));
  }
  state_.dsupset = std::move(keep);

  for (auto& nd : dcheck_) insert_q(std::move(nd));
  dcheck_.clear();
}

void DynamicHs::insert_q(DynNode node) {
  ComponentSet s = node.set();
  auto same = [&](const DynNode& n) { return n.set() == s; };
  if (std::any_of(state_.q.begin(), state_.q.end(), same) || std::any_of(dcalc_.begin(), dcalc_.end(), same)) {
    insert_qdup(std::move(node));
    return;
  }
  auto pos = ranker_.insert_position(state_.q, s, [](const DynNode& n) { return n.set(); });
  state_.q.insert(state_.q.begin() + static_cast<std::ptrdiff_t>(pos), std::move(node));
}

void DynamicHs::insert_qdup(DynNode node) {
  auto pos = std::upper_bound(state_.qdup.begin(), state_.qdup.end(), node.edges.size(),
                              [](std::size_t size, const DynNode& n) { return size < n.edges.size(); });
  state_.qdup.insert(pos, std::move(node));
}

std::optional<DynNode> DynamicHs::take_replacement(const DynNode& deleted, const ComponentSet& x,
                                                   std::vector<std::uint64_t>& used_prefixes) {
  std::size_t j = 0;
  witnesses(x, deleted, &j);
  for (std::size_t k = deleted.edges.size(); k > j; --k) {
    ComponentSet prefix(std::vector<int>(deleted.edges.begin(), deleted.edges.begin() + static_cast<std::ptrdiff_t>(k)));
    for (auto it = state_.qdup.begin(); it != state_.qdup.end(); ++it) {
      if (it->edges.size() != k || it->set() != prefix) continue;
      DynNode cand{it->edges, it->cs, state_.next_id++};
      cand.edges.insert(cand.edges.end(), deleted.edges.begin() + static_cast<std::ptrdiff_t>(k), deleted.edges.end());
      cand.cs.insert(cand.cs.end(), deleted.cs.begin() + static_cast<std::ptrdiff_t>(k), deleted.cs.end());
      relabel(cand, x);
      if (witnesses(x, cand)) continue;
      if (k == deleted.edges.size()) state_.qdup.erase(it);
      else used_prefixes.push_back(it->id);
      return cand;
    }
  }
  return std::nullopt;
}

void DynamicHs::prune(const ComponentSet& x, Scope scope) {
  // Duplicates first, so that survivors are valid replacements.
  std::vector<DynNode> dup_keep;
  for (auto& nd : state_.qdup) {
    if (witnesses(x, nd)) continue;
    relabel(nd, x);
    dup_keep.push_back(std::move(nd));
  }
  state_.qdup = std::move(dup_keep);

  std::vector<Store> stores{{&state_.q, true}, {&state_.dsupset, false}};
  if (scope == Scope::kLabel) {
    stores.push_back({&dcalc_, false});
  } else {
    stores.push_back({&dtimes_, false});
    stores.push_back({&dcheck_, false});
  }

  std::vector<std::uint64_t> used_prefixes;
  for (const auto& store : stores) {
    std::vector<DynNode> keep;
    std::vector<DynNode> queued;
    for (auto& nd : *store.nodes) {
      if (!witnesses(x, nd)) {
        relabel(nd, x);
        keep.push_back(std::move(nd));
        continue;
      }
      if (auto repl = take_replacement(nd, x, used_prefixes)) {
        if (store.queue) queued.push_back(std::move(*repl));
        else keep.push_back(std::move(*repl));
      }
    }
    *store.nodes = std::move(keep);
    for (auto& nd : queued) insert_q(std::move(nd));
  }

  std::erase_if(state_.qdup, [&](const DynNode& n) {
    return std::find(used_prefixes.begin(), used_prefixes.end(), n.id) != used_prefixes.end();
  });

  std::erase_if(state_.ccalc, [&](const ComponentSet& c) { return x.proper_subset_of(c); });
  if (!contains_set(state_.ccalc, x)) state_.ccalc.push_back(x);

  if (cfg_.check_invariants) check_after_prune(x, scope);
}

void DynamicHs::check_node(const DynNode& nd) const {
  auto fail = [&](const std::string& what) { throw InvariantViolation("node " + nd.str() + ": " + what); };
  if (nd.cs.size() != nd.edges.size()) fail("|cs| != |edges|");
  for (std::size_t i = 0; i < nd.edges.size(); ++i) {
    if (!nd.cs[i].contains(nd.edges[i])) fail("edge not in its label");
    for (std::size_t k = 0; k < i; ++k) {
      if (nd.cs[i].contains(nd.edges[k])) fail("label hit by an earlier edge");
    }
  }
}

void DynamicHs::check_invariants() const {
  for (const auto* coll : {&state_.q, &state_.qdup, &state_.dsupset, &dcalc_, &dcheck_, &dtimes_}) {
    for (const auto& nd : *coll) check_node(nd);
  }
  for (std::size_t a = 0; a < state_.q.size(); ++a) {
    for (std::size_t b = a + 1; b < state_.q.size(); ++b) {
      if (state_.q[a].set() == state_.q[b].set()) throw InvariantViolation("set-equal nodes in Q: " + state_.q[a].str());
    }
  }
}

void DynamicHs::check_after_prune(const ComponentSet& x, Scope scope) const {
  std::vector<const std::vector<DynNode>*> colls{&state_.qdup, &state_.q, &state_.dsupset};
  if (scope == Scope::kLabel) colls.push_back(&dcalc_);
  else {
    colls.push_back(&dtimes_);
    colls.push_back(&dcheck_);
  }
  for (const auto* coll : colls) {
    for (const auto& nd : *coll) {
      if (witnesses(x, nd)) throw InvariantViolation(x.conflict_str() + " still witnesses " + nd.str());
    }
  }
  if (!contains_set(state_.ccalc, x)) throw InvariantViolation("Ccalc lacks " + x.conflict_str());
  for (const auto& c : state_.ccalc) {
    if (x.proper_subset_of(c)) throw InvariantViolation("Ccalc keeps superset " + c.conflict_str());
  }
  check_invariants();
}

}  // namespace dynhs
