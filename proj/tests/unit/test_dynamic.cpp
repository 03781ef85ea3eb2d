#include <doctest.h>

#include "../support.hpp"

using namespace dynhs;
using namespace testsupport;

namespace {

DynNode node(std::vector<int> edges, std::vector<ComponentSet> cs) {
  DynNode n;
  n.edges = std::move(edges);
  n.cs = std::move(cs);
  return n;
}

std::vector<std::vector<int>> edges_of(const std::vector<DynNode>& nodes) {
  std::vector<std::vector<int>> out;
  for (const auto& n : nodes) out.push_back(n.edges);
  return out;
}

// Drives the dynamic engine through the worked example, one run per step.
struct PaperRun {
  Dpi dpi = paper_dpi();
  logic::Reasoner r;
  QuickXplainFinder qx{r};
  CountingFinder counting{qx};
  Counters c;
  DynamicHs h{dpi, engine_cfg(5, QueueOrder::kBreadthFirst, FaultModel::uniform(5)), counting, c};
  std::vector<Measurement> script = load_measurement_script(data_path("paper.script.json"));
  Acquired acq;
  Collection last, dcheck, dtimes;
  std::size_t step = 0;

  Collection next() {
    if (step > 0) {
      Acquired n = add_measurement(acq, script[step - 1]);
      dcheck.clear();
      dtimes.clear();
      assign_diags_ok_nok(r, last, dpi, n, c, dcheck, dtimes);
      acq = n;
    }
    ++step;
    last = h.run(acq, dcheck, dtimes);
    return last;
  }
};

}  // namespace

TEST_CASE("dynamicHS: worked example, iteration by iteration") {
  PaperRun p;
  CHECK(canonical(p.next()) == sets({{1, 3}, {1, 4}, {2, 3}, {2, 5}}));
  CHECK(edges_of(p.h.state().qdup) == std::vector<std::vector<int>>{{2, 1}});
  CHECK(edges_of(p.h.state().dsupset) == std::vector<std::vector<int>>{{1, 2, 3}, {1, 2, 4}, {1, 2, 5}});

  long fc_before = p.c.fc;
  CHECK(canonical(p.next()) == sets({{1, 4}, {2, 5}}));
  CHECK(p.dtimes == sets({{1, 3}, {2, 3}}));
  // Both surviving diagnoses come back without a fresh finder call.
  int known = 0;
  for (const auto& e : p.h.trace()) {
    if (e.rule == "known") {
      ++known;
      CHECK_FALSE(e.fresh);
    }
  }
  CHECK(known == 2);
  CHECK(p.c.fc - fc_before == 1);  // the label <4,5> at [1,2,3]

  CHECK(canonical(p.next()) == sets({{1, 4}, {1, 2, 3, 5}}));
  CHECK(canonical(p.next()) == sets({{1, 4}}));
  CHECK(p.c.fc == 6);
  CHECK(p.c.rd == 4);
  CHECK(p.c.cc_tree == 5);
  // rd counts redundancy checks; each check makes at least one finder call.
  CHECK(p.counting.calls - p.c.fc - p.c.cc_tree >= p.c.rd);
}

TEST_CASE("updateTree: relabels with the shrunken conflict and drops the right subtree") {
  PaperRun p;
  p.next();
  p.next();
  // After m1: <2,3,4> became <2,4>; [1,3] is gone and node [1] now carries <2,4>.
  const auto& s2 = p.h.state();
  logic::Reasoner r;
  auto conflicts = canonical(brute_force_min_conflicts(r, p.dpi, p.acq));
  CHECK(std::find(conflicts.begin(), conflicts.end(), ComponentSet{2, 4}) != conflicts.end());
  for (const auto* col : {&s2.q, &s2.qdup, &s2.dsupset, &s2.dcalc}) {
    for (const auto& n : *col) {
      CHECK(n.edges != std::vector<int>{1, 3});
      if (n.edges.size() >= 2 && n.edges[0] == 1) CHECK(n.cs[1] == ComponentSet{2, 4});
    }
  }
  CHECK(std::find(s2.ccalc.begin(), s2.ccalc.end(), ComponentSet{2, 3, 4}) == s2.ccalc.end());

  p.next();
  // After m2: the root label shrinks to <1>, so no branch starts with edge 2.
  const auto& s3 = p.h.state();
  for (const auto* col : {&s3.q, &s3.qdup, &s3.dsupset, &s3.dcalc}) {
    for (const auto& n : *col) {
      CHECK(n.edges[0] == 1);
      CHECK(n.cs[0] == ComponentSet{1});
    }
  }
}

TEST_CASE("redundant: worked examples") {
  Dpi dpi = paper_dpi();
  logic::Reasoner r;
  QuickXplainFinder qx(r);
  Counters c;
  DynamicHs h(dpi, engine_cfg(5, QueueOrder::kBreadthFirst, FaultModel::uniform(5)), qx, c);

  auto w = h.redundant(node({1, 3}, {{1, 2}, {2, 3, 4}}), after_m1());
  REQUIRE(w);
  CHECK(w->position == 1);
  CHECK(w->conflict == ComponentSet{2, 4});
  CHECK(c.rd == 1);

  auto w2 = h.redundant(node({2, 5}, {{1, 2}, {1, 3, 5}}), after_m2());
  REQUIRE(w2);
  CHECK(w2->position == 0);
  CHECK(w2->conflict == ComponentSet{1});
  auto conflicts = canonical(brute_force_min_conflicts(r, dpi, after_m2()));
  CHECK(std::find(conflicts.begin(), conflicts.end(), ComponentSet{1}) != conflicts.end());

  // Every label still minimal: not redundant.
  CHECK_FALSE(h.redundant(node({1, 3}, {{1, 2}, {2, 3, 4}}), Acquired{}));
  CHECK(c.rd == 3);

  std::size_t pos = 9;
  CHECK(witnesses(ComponentSet{2, 4}, node({1, 3}, {{1, 2}, {2, 3, 4}}), &pos));
  CHECK(pos == 1);
  // A witness must avoid the edges above its position.
  CHECK_FALSE(witnesses(ComponentSet{1, 4}, node({1, 3}, {{1, 2}, {2, 3, 4}})));
}

TEST_CASE("search state survives a JSON round trip") {
  PaperRun p;
  p.next();
  p.next();
  auto j = state_to_json(p.h.state());
  CHECK(state_to_json(state_from_json(j)) == j);

  // A resumed engine continues exactly like the original.
  Counters c2 = p.c;
  logic::Reasoner r;
  QuickXplainFinder qx(r);
  DynamicHs resumed(p.dpi, engine_cfg(5, QueueOrder::kBreadthFirst, FaultModel::uniform(5)), qx, c2,
                    state_from_json(j));
  Acquired n = add_measurement(p.acq, p.script[1]);
  Collection dc, dt;
  assign_diags_ok_nok(r, p.last, p.dpi, n, c2, dc, dt);
  auto a = resumed.run(n, dc, dt);
  auto b = p.next();
  CHECK(a == b);
  CHECK(state_to_json(resumed.state()) == state_to_json(p.h.state()));
}

TEST_CASE("dynamicHS agrees with HS-Tree and keeps its invariants on random sessions") {
  for (unsigned seed = 1; seed <= 60; ++seed) {
    CAPTURE(seed);
    Dpi dpi = small_dpi(seed);
    std::mt19937 rng(seed);
    logic::Reasoner r;
    ComponentSet actual = random_min_diagnosis(r, dpi, {}, rng);
    int ld = std::vector<int>{2, 3, 0}[seed % 3];
    QueueOrder order = seed % 2 ? QueueOrder::kBreadthFirst : QueueOrder::kProbability;
    SessionConfig cfg;
    cfg.ld = ld;
    cfg.order = order;
    cfg.pr = FaultModel::random(dpi.size(), seed);
    cfg.check_invariants = true;
    SimulatedOracle o1(actual), o2(actual);
    auto dyn = run_session(dpi, cfg, o1);
    cfg.engine = EngineKind::kHsTree;
    auto hst = run_session(dpi, cfg, o2);
    REQUIRE(dyn.log.size() == hst.log.size());
    for (std::size_t i = 0; i < dyn.log.size(); ++i) {
      CHECK(canonical(dyn.log[i].diagnoses) == canonical(hst.log[i].diagnoses));
    }
    CHECK(dyn.final_diagnosis == hst.final_diagnosis);
    CHECK(dyn.final_diagnosis == actual);
  }
}
