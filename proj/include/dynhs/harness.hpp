#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dynhs/sequential.hpp"

namespace dynhs {

struct CompareCase {
  std::string name;
  Dpi dpi;
  SessionConfig cfg;  // engine is overridden per run
  std::function<std::unique_ptr<Oracle>()> make_oracle;
};

struct CompareRow {
  std::string name;
  EngineKind engine = EngineKind::kDynamic;
  int iterations = 0;
  Counters counters;
  double wall_ms = 0;
  std::optional<ComponentSet> final_diagnosis;
  std::vector<Collection> diagnoses;  // per iteration, canonical order
  std::string error;
};

struct CompareReport {
  std::vector<CompareRow> rows;  // dynamic, hstree per case
  int cases = 0;
  int mismatches = 0;  // cases whose per-iteration diagnoses differ
  long fc_dynamic = 0, fc_hstree = 0;
  double ms_dynamic = 0, ms_hstree = 0;

  // 100 * (1 - dynamic / hstree) over the summed totals; 0 when empty.
  double fc_savings_pct() const;
  double runtime_savings_pct() const;
  // Per-case savings averaged over cases where HS-Tree did any work.
  double mean_fc_savings_pct() const;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

CompareRow run_case(const CompareCase& c, EngineKind engine);
CompareReport compare(const std::vector<CompareCase>& cases);

}  // namespace dynhs
