#include "dynhs/harness.hpp"

#include <chrono>
#include <sstream>

namespace dynhs {

namespace {

double savings(double dyn, double hs) { return hs > 0 ? 100.0 * (1.0 - dyn / hs) : 0.0; }

}  // namespace

CompareRow run_case(const CompareCase& c, EngineKind engine) {
  CompareRow row;
  row.name = c.name;
  row.engine = engine;
  SessionConfig cfg = c.cfg;
  cfg.engine = engine;
  auto oracle = c.make_oracle();
  auto t0 = std::chrono::steady_clock::now();
  try {
    auto res = run_session(c.dpi, cfg, *oracle);
    row.final_diagnosis = res.final_diagnosis;
    row.counters = res.counters;
    row.iterations = static_cast<int>(res.log.size());
    for (const auto& rec : res.log) row.diagnoses.push_back(canonical(rec.diagnoses));
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

CompareReport compare(const std::vector<CompareCase>& cases) {
  CompareReport rep;
  for (const auto& c : cases) {
    auto dyn = run_case(c, EngineKind::kDynamic);
    auto hs = run_case(c, EngineKind::kHsTree);
    ++rep.cases;
    if (dyn.diagnoses != hs.diagnoses || dyn.final_diagnosis != hs.final_diagnosis || dyn.error != hs.error) {
      ++rep.mismatches;
    }
    rep.fc_dynamic += dyn.counters.fc;
    rep.fc_hstree += hs.counters.fc;
    rep.ms_dynamic += dyn.wall_ms;
    rep.ms_hstree += hs.wall_ms;
    rep.rows.push_back(std::move(dyn));
    rep.rows.push_back(std::move(hs));
  }
  return rep;
}

double CompareReport::fc_savings_pct() const {
  return savings(static_cast<double>(fc_dynamic), static_cast<double>(fc_hstree));
}

double CompareReport::runtime_savings_pct() const { return savings(ms_dynamic, ms_hstree); }

double CompareReport::mean_fc_savings_pct() const {
  double sum = 0;
  int n = 0;
  for (std::size_t i = 0; i + 1 < rows.size(); i += 2) {
    if (rows[i + 1].counters.fc == 0) continue;
    sum += savings(static_cast<double>(rows[i].counters.fc), static_cast<double>(rows[i + 1].counters.fc));
    ++n;
  }
  return n ? sum / n : 0.0;
}

nlohmann::json CompareReport::to_json() const {
  auto rows_json = nlohmann::json::array();
  for (const auto& r : rows) {
    rows_json.push_back({{"name", r.name},
                         {"engine", engine_name(r.engine)},
                         {"iterations", r.iterations},
                         {"fc", r.counters.fc},
                         {"rd", r.counters.rd},
                         {"cc_tree", r.counters.cc_tree},
                         {"cc_session", r.counters.cc_session},
                         {"wall_ms", r.wall_ms},
                         {"final", r.final_diagnosis ? nlohmann::json(r.final_diagnosis->axiom_str()) : nlohmann::json()},
                         {"error", r.error}});
  }
  return {{"rows", rows_json},
          {"summary",
           {{"cases", cases},
            {"mismatches", mismatches},
            {"fc_dynamic", fc_dynamic},
            {"fc_hstree", fc_hstree},
            {"fc_savings_pct", fc_savings_pct()},
            {"mean_fc_savings_pct", mean_fc_savings_pct()},
            {"runtime_savings_pct", runtime_savings_pct()}}}};
}

std::string CompareReport::to_csv() const {
  std::ostringstream out;
  out << "name,engine,iterations,fc,rd,cc_tree,cc_session,wall_ms,final,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    for (auto& ch : err) {
      if (ch == '"') ch = '\'';
    }
    out << r.name << ',' << engine_name(r.engine) << ',' << r.iterations << ',' << r.counters.fc << ','
        << r.counters.rd << ',' << r.counters.cc_tree << ',' << r.counters.cc_session << ',' << r.wall_ms << ",\""
        << (r.final_diagnosis ? r.final_diagnosis->axiom_str() : "") << "\",\"" << err << "\"\n";
  }
  return out.str();
}

}  // namespace dynhs
