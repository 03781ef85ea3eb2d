// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "../support.hpp"
#include "dynhs/cli.hpp"
#include "dynhs/harness.hpp"

using namespace dynhs;
using namespace testsupport;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;
long order_violations = 0, order_checked = 0;
long invariant_violations = 0, invariant_runs = 0;

void report(int n, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", n, what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

void check_order(const Collection& emitted, QueueOrder order, const FaultModel& pr) {
  ++order_checked;
  for (std::size_t i = 1; i < emitted.size(); ++i) {
    bool ok = order == QueueOrder::kBreadthFirst ? emitted[i - 1].size() <= emitted[i].size()
                                                  : pr.probability(emitted[i - 1]) >= pr.probability(emitted[i]) * (1 - 1e-12);
    if (!ok) ++order_violations;
  }
}

void note_session_error(const std::string& error) {
  ++invariant_runs;
  if (error.rfind("invariant violation", 0) == 0) ++invariant_violations;
}

SessionConfig paper_cfg(EngineKind engine, bool pinned) {
  SessionConfig cfg;
  cfg.engine = engine;
  cfg.ld = 5;
  cfg.check_invariants = true;
  for (const auto& m : load_measurement_script(data_path("paper.script.json"))) cfg.queries.push_back(m.sentence);
  if (pinned) cfg.conflict_script = load_conflict_script(data_path("paper.conflicts.json"));
  return cfg;
}

// Runs the worked example with its scripted answers.
std::unique_ptr<Session> paper_session(EngineKind engine, bool pinned) {
  auto s = std::make_unique<Session>(paper_dpi(), paper_cfg(engine, pinned));
  s->start();
  for (const auto& m : load_measurement_script(data_path("paper.script.json"))) {
    if (s->status() != SessionStatus::kAwaitingAnswer) break;
    s->answer(m.outcome);
  }
  note_session_error(s->error());
  return s;
}

void golden_diagnoses() {
  auto t0 = Clock::now();
  const std::vector<Collection> expected = {sets({{1, 3}, {1, 4}, {2, 3}, {2, 5}}), sets({{1, 4}, {2, 5}}),
                                            sets({{1, 4}, {1, 2, 3, 5}}), sets({{1, 4}})};
  bool ok = true;
  std::string detail;
  for (auto engine : {EngineKind::kDynamic, EngineKind::kHsTree}) {
    auto s = paper_session(engine, false);
    std::vector<Collection> got;
    for (const auto& rec : s->log()) {
      got.push_back(canonical(rec.diagnoses));
      check_order(rec.diagnoses, QueueOrder::kBreadthFirst, FaultModel::uniform(5));
    }
    bool match = got == expected && s->final_diagnosis() == ComponentSet{1, 4};
    ok = ok && match;
    detail += engine_name(engine) + (match ? " ok" : " MISMATCH") + ", ";
  }
  double secs = seconds_since(t0);
  ok = ok && secs < 1.0;
  report(1, ok, "golden diagnoses", detail + fmt("%.3f s", secs));
}

void golden_counters() {
  auto dyn = paper_session(EngineKind::kDynamic, true);
  auto hst = paper_session(EngineKind::kHsTree, true);
  auto triple = [](const Counters& c) {
    return std::to_string(c.fc) + "/" + std::to_string(c.rd) + "/" + std::to_string(c.cc_tree);
  };
  bool ok = triple(hst->counters()) == "14/0/9" && triple(dyn->counters()) == "6/4/5";
  report(2, ok, "golden counters", "hstree " + triple(hst->counters()) + ", dynamic " + triple(dyn->counters()));
}

void completeness() {
  auto t0 = Clock::now();
  logic::Reasoner r;
  int problems = 0, discrepancies = 0;
  std::string first;
  for (unsigned seed = 1; problems < 240; ++seed) {
    Transition t;
    Dpi dpi = small_dpi(seed, 1, 8, 6);
    std::vector<Acquired> states = {Acquired{}};
    if (seed % 2 == 0 && random_transition(seed, t)) {
      dpi = t.dpi;
      states.push_back(t.after);
    }
    for (const auto& acq : states) {
      ++problems;
      auto truth = canonical(brute_force_min_diagnoses(r, dpi, acq));
      // Duality cross-check of the oracle itself.
      bool oracle_ok = truth == min_hitting_sets(brute_force_min_conflicts(r, dpi, acq), dpi.size());
      QueueOrder order = seed % 3 == 0 ? QueueOrder::kProbability : QueueOrder::kBreadthFirst;
      FaultModel pr = FaultModel::random(dpi.size(), seed);
      EngineConfig cfg = engine_cfg(0, order, pr, true);

      QuickXplainFinder qx(r);
      Counters c1, c2;
      auto hs = run_hs_tree(dpi, acq, cfg, qx, c1);
      check_order(hs, order, pr);
      Collection dyn;
      ++invariant_runs;
      try {
        DynamicHs engine(dpi, cfg, qx, c2);
        dyn = engine.run(acq, {}, {});
        check_order(dyn, order, pr);
      } catch (const InvariantViolation&) {
        ++invariant_violations;
      }
      if (!oracle_ok || canonical(hs) != truth || canonical(dyn) != truth) {
        if (discrepancies++ == 0) first = " (first: seed " + std::to_string(seed) + ")";
      }
    }
  }
  double secs = seconds_since(t0);
  report(3, discrepancies == 0 && secs < 60.0, "oracle completeness",
         std::to_string(problems) + " problems, " + std::to_string(discrepancies) + " discrepancies" + first + ", " +
             fmt("%.1f s", secs));
}

void equivalence() {
  const int ld_values[] = {2, 3, 5, 0};
  int sessions = 0, discrepancies = 0, errors = 0;
  std::string first;
  logic::Reasoner r;
  for (unsigned seed = 1; sessions < 240; ++seed) {
    Dpi dpi = small_dpi(1000 + seed, 4, 8, 6);
    std::mt19937 rng(seed);
    ComponentSet actual = random_min_diagnosis(r, dpi, {}, rng);
    SessionConfig cfg;
    cfg.ld = ld_values[seed % 4];
    cfg.order = (seed / 4) % 2 ? QueueOrder::kProbability : QueueOrder::kBreadthFirst;
    cfg.pr = FaultModel::random(dpi.size(), seed);
    cfg.check_invariants = true;
    SessionLog logs[2];
    std::optional<ComponentSet> finals[2];
    bool failed = false;
    for (int k = 0; k < 2; ++k) {
      cfg.engine = k == 0 ? EngineKind::kDynamic : EngineKind::kHsTree;
      Session s(dpi, cfg);
      SimulatedOracle oracle(actual);
      s.start();
      while (s.status() == SessionStatus::kAwaitingAnswer) s.answer(oracle.measure(*s.pending(), dpi, s.acquired()));
      note_session_error(s.error());
      failed = failed || s.status() != SessionStatus::kDone;
      logs[k] = s.log();
      finals[k] = s.final_diagnosis();
      for (const auto& rec : s.log()) check_order(rec.diagnoses, cfg.order, *cfg.pr);
    }
    ++sessions;
    bool same = logs[0].size() == logs[1].size() && finals[0] == finals[1] && finals[0] == actual;
    for (std::size_t i = 0; same && i < logs[0].size(); ++i) {
      same = canonical(logs[0][i].diagnoses) == canonical(logs[1][i].diagnoses);
    }
    if (failed) ++errors;
    if (!same || failed) {
      if (discrepancies++ == 0) first = " (first: seed " + std::to_string(seed) + ")";
    }
  }
  report(4, discrepancies == 0, "engine equivalence",
         std::to_string(sessions) + " sessions, " + std::to_string(discrepancies) + " discrepancies, " +
             std::to_string(errors) + " failed sessions" + first);
}

void transition_laws() {
  logic::Reasoner r;
  int transitions = 0, violations = 0;
  for (unsigned seed = 1; transitions < 520; ++seed) {
    Transition t;
    if (!random_transition(50000 + seed, t)) continue;
    ++transitions;
    auto law = check_laws(brute_force_min_diagnoses(r, t.dpi, t.before), brute_force_min_diagnoses(r, t.dpi, t.after),
                          brute_force_min_conflicts(r, t.dpi, t.before), brute_force_min_conflicts(r, t.dpi, t.after));
    if (!law.supersets || !law.shrink || !law.change) ++violations;
  }
  report(5, violations == 0, "transition laws",
         std::to_string(transitions) + " transitions, " + std::to_string(violations) + " violations");
}

void best_first() {
  report(6, order_violations == 0 && order_checked > 0, "best-first emission",
         std::to_string(order_checked) + " emissions checked, " + std::to_string(order_violations) + " violations");
}

void efficiency() {
  std::ostringstream out, err;
  int code = cli_main({"compare", "--generate", "60", "--axioms", "10", "--axioms-max", "14", "--vars", "6",
                       "--trigger-bias", "0.8", "--gen-seed", "1", "--check-invariants", "--csv",
                       "benchmark_report.csv", "--json", "benchmark_report.json"},
                      out, err);
  std::ifstream in("benchmark_report.json");
  auto doc = nlohmann::json::parse(in, nullptr, false);
  if (code != 0 || doc.is_discarded()) {
    report(7, false, "efficiency trend", "compare failed (exit " + std::to_string(code) + "): " + err.str());
    return;
  }
  const auto& s = doc.at("summary");
  for (const auto& row : doc.at("rows")) note_session_error(row.at("error").get<std::string>());
  long fd = s.at("fc_dynamic"), fh = s.at("fc_hstree");
  int cases = s.at("cases");
  bool ok = cases >= 50 && fd < fh && s.at("mismatches") == 0;
  report(7, ok, "efficiency trend",
         std::to_string(cases) + " sessions, FC " + std::to_string(fd) + " vs " + std::to_string(fh) + ", savings " +
             fmt("%.1f%%", s.at("fc_savings_pct").get<double>()) + " aggregate, " +
             fmt("%.1f%%", s.at("mean_fc_savings_pct").get<double>()) +
             " mean per session; report in benchmark_report.{csv,json}");
}

void state_integrity() {
  report(8, invariant_violations == 0 && invariant_runs > 0, "state integrity",
         std::to_string(invariant_runs) + " checked runs, " + std::to_string(invariant_violations) + " violations");
}

}  // namespace

int main() {
  auto guard = [](int n, const char* what, void (*f)()) {
    try {
      f();
    } catch (const std::exception& e) {
      report(n, false, what, std::string("exception: ") + e.what());
    }
  };
  guard(1, "golden diagnoses", golden_diagnoses);
  guard(2, "golden counters", golden_counters);
  guard(3, "oracle completeness", completeness);
  guard(4, "engine equivalence", equivalence);
  guard(5, "transition laws", transition_laws);
  best_first();
  guard(7, "efficiency trend", efficiency);
  state_integrity();
  return failures == 0 ? 0 : 1;
}
