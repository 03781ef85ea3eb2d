#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "../support.hpp"
#include "dynhs/cli.hpp"
#include "dynhs/harness.hpp"

using namespace dynhs;
using namespace testsupport;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("dynhs_cli_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("generator: deterministic per seed and valid for sessions") {
  RandomDpiSpec spec;
  spec.axioms = 10;
  spec.trigger_bias = 0.8;
  for (unsigned seed = 1; seed <= 20; ++seed) {
    spec.seed = seed;
    Dpi a = generate_dpi(spec), b = generate_dpi(spec);
    CHECK(format_dpi(a) == format_dpi(b));
    CHECK(a.size() == 10);
    logic::Reasoner r;
    CHECK_NOTHROW(validate_for_session(r, a));
  }
  spec.axioms = 0;
  CHECK_THROWS_AS(generate_dpi(spec), std::invalid_argument);
  spec.axioms = 4;
  spec.vars = 0;
  CHECK_THROWS_AS(generate_dpi(spec), std::invalid_argument);
  CHECK(variable_name(0) == "A");
  CHECK(variable_name(25) == "Z");
  CHECK(variable_name(26) == "V26");
}

TEST_CASE("compare: empty input gives an empty report") {
  auto rep = compare({});
  CHECK(rep.cases == 0);
  CHECK(rep.rows.empty());
  CHECK(rep.fc_savings_pct() == 0.0);
  CHECK(rep.to_csv() == "name,engine,iterations,fc,rd,cc_tree,cc_session,wall_ms,final,error\n");
}

TEST_CASE("compare: worked example row pair") {
  CompareCase c;
  c.name = "paper";
  c.dpi = paper_dpi();
  c.cfg.conflict_script = load_conflict_script(data_path("paper.conflicts.json"));
  auto script = load_measurement_script(data_path("paper.script.json"));
  c.make_oracle = [script] { return std::make_unique<ScriptedOracle>(script); };
  auto rep = compare({c});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.mismatches == 0);
  CHECK(rep.rows[0].engine == EngineKind::kDynamic);
  CHECK(rep.rows[0].counters.fc == 6);
  CHECK(rep.rows[1].counters.fc == 14);
  CHECK(rep.fc_dynamic == 6);
  CHECK(rep.fc_hstree == 14);
  CHECK(rep.fc_savings_pct() == doctest::Approx(100.0 * (1.0 - 6.0 / 14.0)));
  CHECK(rep.rows[0].final_diagnosis == ComponentSet{1, 4});
  auto j = rep.to_json();
  CHECK(j.at("rows").size() == 2);
  CHECK(j.contains("summary"));
}

TEST_CASE("compare: oracle failures become row errors") {
  CompareCase c;
  c.name = "short";
  c.dpi = paper_dpi();
  c.make_oracle = [] { return std::make_unique<ScriptedOracle>(std::vector<Measurement>{}); };
  auto rep = compare({c});
  REQUIRE(rep.rows.size() == 2);
  CHECK_FALSE(rep.rows[0].error.empty());
  CHECK_FALSE(rep.rows[1].error.empty());
}

TEST_CASE("cli: run on the worked example") {
  auto dpi = data_path("paper.dpi");
  for (std::string engine : {"dynamic", "hstree"}) {
    auto r = cli({"run", "--dpi", dpi, "--engine", engine, "--script", data_path("paper.script.json"),
                  "--conflict-script", data_path("paper.conflicts.json")});
    CAPTURE(r.err);
    CHECK(r.code == 0);
    CHECK(r.out.find("final: [a1,a4]") != std::string::npos);
    std::string counters = engine == "dynamic" ? "fc=6 rd=4 cc_tree=5" : "fc=14 rd=0 cc_tree=9";
    CHECK(r.out.find(counters) != std::string::npos);
  }
}

TEST_CASE("cli: log written by run replays identically") {
  auto dir = scratch("replay");
  auto log = (dir / "run.ndjson").string();
  std::vector<std::string> common = {"--dpi", data_path("paper.dpi"), "--script", data_path("paper.script.json"),
                                     "--conflict-script", data_path("paper.conflicts.json")};
  auto args = std::vector<std::string>{"run"};
  args.insert(args.end(), common.begin(), common.end());
  args.insert(args.end(), {"--out", log});
  REQUIRE(cli(args).code == 0);
  auto written = slurp(log);
  CHECK(std::count(written.begin(), written.end(), '\n') == 4);

  args = {"replay", "--log", log};
  args.insert(args.end(), common.begin(), common.end());
  auto r = cli(args);
  CHECK(r.code == 0);
  CHECK(r.out.find("identical") != std::string::npos);

  // A replay under another engine gives different counters.
  args.insert(args.end(), {"--engine", "hstree"});
  CHECK(cli(args).code == 4);
}

TEST_CASE("cli: exit codes") {
  auto dir = scratch("codes");
  CHECK(cli({}).code == 1);
  CHECK(cli({"run"}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"run", "--dpi", data_path("paper.dpi"), "--engine", "nope"}).code == 1);

  auto bad = dir / "bad.dpi";
  std::ofstream(bad) << "[O]\na1: A &\n";
  CHECK(cli({"run", "--dpi", bad.string(), "--actual", "random"}).code == 2);
  // Nothing is faulty here, so there is nothing to diagnose.
  auto healthy = dir / "healthy.dpi";
  std::ofstream(healthy) << "[O]\na1: A\n[N]\nB\n";
  CHECK(cli({"run", "--dpi", healthy.string(), "--actual", "random"}).code == 2);

  auto shortscript = dir / "short.json";
  std::ofstream(shortscript) << R"([{"sentence": "A -> C", "outcome": false}])";
  CHECK(cli({"run", "--dpi", data_path("paper.dpi"), "--script", shortscript.string()}).code == 3);

  CHECK(cli({"run", "--dpi", data_path("paper.dpi"), "--actual", "a1,a4"}).code == 0);
}

TEST_CASE("cli: gen then compare over the generated corpus") {
  auto dir = scratch("corpus");
  auto r = cli({"gen", "--axioms", "6", "--vars", "4", "--trigger-bias", "0.8", "--seed", "3", "--count", "4", "--dir",
                dir.string()});
  REQUIRE(r.code == 0);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir)) files += e.path().extension() == ".dpi";
  CHECK(files == 4);

  auto again = scratch("corpus2");
  cli({"gen", "--axioms", "6", "--vars", "4", "--trigger-bias", "0.8", "--seed", "3", "--count", "4", "--dir",
       again.string()});
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    CHECK(slurp(e.path()) == slurp(again / e.path().filename()));
  }

  auto csv = (dir / "out.csv").string();
  auto json = (dir / "out.json").string();
  r = cli({"compare", "--corpus", dir.string(), "--csv", csv, "--json", json, "--check-invariants"});
  CAPTURE(r.err);
  CHECK(r.code == 0);
  auto text = slurp(csv);
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 4);
  auto summary = nlohmann::json::parse(slurp(json)).at("summary");
  CHECK(summary.at("mismatches") == 0);

  CHECK(cli({"gen", "--axioms", "0"}).code != 0);
}
