#include "dynhs/cli.hpp"

#include <CLI11.hpp>
#include <httplib.h>

#include <csignal>
#include <filesystem>
#include <fstream>
#include <random>

#include "dynhs/generator.hpp"
#include "dynhs/harness.hpp"
#include "dynhs/service.hpp"

namespace dynhs {

namespace {

using nlohmann::json;

constexpr int kOk = 0, kUsage = 1, kValidation = 2, kOracle = 3, kMismatch = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunFlags {
  std::string dpi, engine = "dynamic", order = "bfs", pr, script, conflict_script, actual, out;
  int ld = 5;
  unsigned seed = 0;
  bool check = false;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--dpi", f.dpi, "DPI file")->required();
  cmd->add_option("--engine", f.engine, "dynamic | hstree")->check(CLI::IsMember({"dynamic", "hstree"}));
  cmd->add_option("--ld", f.ld, "leading diagnoses per iteration (0: unlimited)");
  cmd->add_option("--order", f.order, "bfs | prob")->check(CLI::IsMember({"bfs", "prob"}));
  cmd->add_option("--pr", f.pr, "fault probabilities: JSON list file or random:SEED");
  cmd->add_option("--script", f.script, "measurement script (JSON)");
  cmd->add_option("--conflict-script", f.conflict_script, "conflict script (JSON)");
  cmd->add_option("--actual", f.actual, "actual diagnosis, e.g. a1,a4, or 'random'");
  cmd->add_option("--out", f.out, "write the session log (JSON lines)");
  cmd->add_option("--seed", f.seed, "seed for --actual random");
  cmd->add_flag("--check-invariants", f.check, "verify tree invariants after every operation");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FaultModel parse_pr(const std::string& spec, int n) {
  if (spec.rfind("random:", 0) == 0) return FaultModel::random(n, static_cast<unsigned>(std::stoul(spec.substr(7))));
  auto doc = json::parse(slurp(spec));
  FaultModel m(doc.get<std::vector<double>>());
  if (m.size() != n) throw std::invalid_argument("--pr needs one value per axiom");
  return m;
}

SessionConfig config_from(const RunFlags& f, const Dpi& dpi) {
  SessionConfig cfg;
  cfg.engine = parse_engine(f.engine);
  if (f.ld == 1 || f.ld < 0) throw UsageError("--ld must be 0 (unlimited) or at least 2");
  cfg.ld = f.ld;
  cfg.order = parse_order(f.order);
  if (!f.pr.empty()) cfg.pr = parse_pr(f.pr, dpi.size());
  if (!f.conflict_script.empty()) cfg.conflict_script = load_conflict_script(f.conflict_script);
  cfg.check_invariants = f.check;
  return cfg;
}

ComponentSet resolve_actual(const RunFlags& f, const Dpi& dpi) {
  ComponentSet actual;
  if (f.actual == "random") {
    logic::Reasoner r;
    std::mt19937 rng(f.seed);
    actual = random_min_diagnosis(r, dpi, {}, rng);
  } else {
    actual = parse_component_set(f.actual);
  }
  logic::Reasoner r;
  if (!actual.items().empty() && actual.items().back() > dpi.size()) throw UsageError("--actual names an unknown axiom");
  if (!is_diagnosis(r, dpi, {}, actual)) throw ValidationError("--actual " + actual.axiom_str() + " is not a diagnosis");
  return actual;
}

std::unique_ptr<Oracle> oracle_from(const RunFlags& f, const Dpi& dpi) {
  if (!f.script.empty() && !f.actual.empty()) throw UsageError("use either --script or --actual");
  if (!f.script.empty()) return std::make_unique<ScriptedOracle>(load_measurement_script(f.script));
  if (f.actual.empty()) throw UsageError("an oracle is required: --script PATH or --actual a1,a4");
  return std::make_unique<SimulatedOracle>(resolve_actual(f, dpi));
}

void print_log(const SessionLog& log, std::ostream& out) {
  for (const auto& r : log) {
    out << "iteration " << r.iteration << ": " << format_diagnoses(r.diagnoses);
    if (r.query) out << "  ask " << r.query->str() << " -> " << (r.outcome ? (*r.outcome ? "yes" : "no") : "?");
    out << "\n";
  }
}

void print_counters(const Counters& c, std::ostream& out) {
  out << "fc=" << c.fc << " rd=" << c.rd << " cc_tree=" << c.cc_tree << " cc_session=" << c.cc_session << "\n";
}

int cmd_run(const RunFlags& f, std::ostream& out) {
  Dpi dpi = load_dpi(f.dpi);
  SessionConfig cfg = config_from(f, dpi);
  auto oracle = oracle_from(f, dpi);
  SessionResult res = run_session(dpi, cfg, *oracle);
  print_log(res.log, out);
  out << "final: " << (res.final_diagnosis ? res.final_diagnosis->axiom_str() : "none") << "\n";
  print_counters(res.counters, out);
  if (!f.out.empty()) {
    std::ofstream o(f.out);
    if (!o) throw UsageError("cannot write " + f.out);
    o << log_to_ndjson(res.log);
  }
  return kOk;
}

int cmd_replay(const RunFlags& f, const std::string& log_path, std::ostream& out) {
  SessionLog recorded;
  std::vector<Measurement> script;
  std::istringstream lines(slurp(log_path));
  for (std::string line; std::getline(lines, line);) {
    if (line.empty()) continue;
    auto rec = IterationRecord::from_json(json::parse(line));
    if (rec.query && rec.outcome) script.push_back({*rec.query, *rec.outcome});
    recorded.push_back(std::move(rec));
  }
  Dpi dpi = load_dpi(f.dpi);
  SessionConfig cfg = config_from(f, dpi);
  ScriptedOracle oracle(script);
  auto res = run_session(dpi, cfg, oracle);
  if (same_log(res.log, recorded)) {
    out << "identical: " << recorded.size() << " iterations\n";
    return kOk;
  }
  out << "replay differs from " << log_path << "\n";
  return kMismatch;
}

struct GenFlags {
  RandomDpiSpec spec;
  int count = 1;
  std::string out, dir;
};

int cmd_gen(const GenFlags& g, std::ostream& out) {
  if (g.count < 1) throw UsageError("--count must be positive");
  if (g.count > 1 && g.dir.empty()) throw UsageError("--count > 1 needs --dir");
  for (int i = 0; i < g.count; ++i) {
    RandomDpiSpec spec = g.spec;
    spec.seed = g.spec.seed + static_cast<unsigned>(i);
    std::string text = "# generated: axioms=" + std::to_string(spec.axioms) + " vars=" + std::to_string(spec.vars) +
                       " seed=" + std::to_string(spec.seed) + "\n" + format_dpi(generate_dpi(spec));
    if (!g.dir.empty()) {
      std::filesystem::create_directories(g.dir);
      auto path = std::filesystem::path(g.dir) / ("gen_" + std::to_string(spec.seed) + ".dpi");
      std::ofstream(path) << text;
      out << path.string() << "\n";
    } else if (!g.out.empty()) {
      std::ofstream o(g.out);
      if (!o) throw UsageError("cannot write " + g.out);
      o << text;
    } else {
      out << text;
    }
  }
  return kOk;
}

struct CompareFlags {
  RunFlags run;
  std::vector<std::string> dpis;
  std::string corpus, csv, json_out;
  int generate = 0;
  RandomDpiSpec spec;
  int axioms_max = 0;
};

int cmd_compare(CompareFlags c, std::ostream& out) {
  std::vector<std::pair<std::string, Dpi>> corpus;
  for (const auto& p : c.dpis) corpus.emplace_back(std::filesystem::path(p).stem().string(), load_dpi(p));
  if (!c.corpus.empty()) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(c.corpus)) {
      if (e.path().extension() == ".dpi") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& p : files) corpus.emplace_back(p.stem().string(), load_dpi(p.string()));
  }
  int hi = std::max(c.axioms_max, c.spec.axioms);
  for (int i = 0; i < c.generate; ++i) {
    RandomDpiSpec spec = c.spec;
    spec.axioms = c.spec.axioms + i % (hi - c.spec.axioms + 1);
    spec.seed = c.spec.seed + static_cast<unsigned>(i);
    corpus.emplace_back("gen_" + std::to_string(spec.seed), generate_dpi(spec));
  }

  std::vector<CompareCase> cases;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto& [name, dpi] = corpus[i];
    RunFlags f = c.run;
    if (f.script.empty() && f.actual.empty()) {
      f.actual = "random";
      f.seed = c.run.seed + static_cast<unsigned>(i);
    }
    if (f.pr == "random") f.pr = "random:" + std::to_string(c.run.seed + i);
    SessionConfig cfg = config_from(f, dpi);
    std::function<std::unique_ptr<Oracle>()> make;
    if (!f.script.empty()) {
      auto script = load_measurement_script(f.script);
      make = [script] { return std::make_unique<ScriptedOracle>(script); };
    } else {
      // Resolved once so both engines face the same oracle.
      ComponentSet actual = resolve_actual(f, dpi);
      make = [actual] { return std::make_unique<SimulatedOracle>(actual); };
    }
    cases.push_back({name, dpi, cfg, make});
  }

  auto rep = compare(cases);
  out << "cases=" << rep.cases << " mismatches=" << rep.mismatches << " fc dynamic=" << rep.fc_dynamic
      << " hstree=" << rep.fc_hstree << " fc savings=" << rep.fc_savings_pct() << "% runtime savings="
      << rep.runtime_savings_pct() << "%\n";
  for (const auto& r : rep.rows) {
    out << "  " << r.name << " " << engine_name(r.engine) << " fc=" << r.counters.fc << " rd=" << r.counters.rd
        << " cc_tree=" << r.counters.cc_tree << (r.error.empty() ? "" : " error: " + r.error) << "\n";
  }
  if (!c.csv.empty()) std::ofstream(c.csv) << rep.to_csv();
  if (!c.json_out.empty()) std::ofstream(c.json_out) << rep.to_json().dump(2) << "\n";
  return kOk;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::string& data, const std::string& host, int port, int workers, std::ostream& out) {
  SessionService service(data, {true, workers});
  httplib::Server server;
  mount_routes(server, service);
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (g_server) g_server->stop();
  });
  std::signal(SIGTERM, [](int) {
    if (g_server) g_server->stop();
  });
  out << "listening on http://" << host << ":" << port << " (data: " << data << ")" << std::endl;
  bool ok = server.listen(host, port);
  g_server = nullptr;
  return ok ? kOk : kUsage;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sequential diagnosis with HS-Tree and DynamicHS", "dynhs"};
  app.require_subcommand(1);

  RunFlags run;
  auto* run_cmd = app.add_subcommand("run", "run one sequential diagnosis session");
  add_run_flags(run_cmd, run);

  RunFlags replay;
  std::string replay_log;
  auto* replay_cmd = app.add_subcommand("replay", "re-run a logged session and compare");
  add_run_flags(replay_cmd, replay);
  replay_cmd->add_option("--log", replay_log, "session log (JSON lines)")->required();

  CompareFlags cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "run both engines over a corpus and report counters");
  cmp_cmd->add_option("--dpi", cmp.dpis, "DPI files");
  cmp_cmd->add_option("--corpus", cmp.corpus, "directory of .dpi files");
  cmp_cmd->add_option("--generate", cmp.generate, "number of random DPIs to add");
  cmp_cmd->add_option("--axioms", cmp.spec.axioms, "axioms per generated DPI (lower bound)");
  cmp_cmd->add_option("--axioms-max", cmp.axioms_max, "upper bound; sizes cycle through the range");
  cmp_cmd->add_option("--vars", cmp.spec.vars, "variables per generated DPI");
  cmp_cmd->add_option("--trigger-bias", cmp.spec.trigger_bias, "generator trigger bias");
  cmp_cmd->add_option("--gen-seed", cmp.spec.seed, "first generator seed");
  cmp_cmd->add_option("--engine", cmp.run.engine, "ignored; both engines run");
  cmp_cmd->add_option("--ld", cmp.run.ld, "leading diagnoses per iteration (0: unlimited)");
  cmp_cmd->add_option("--order", cmp.run.order, "bfs | prob")->check(CLI::IsMember({"bfs", "prob"}));
  cmp_cmd->add_option("--pr", cmp.run.pr, "JSON list file, random:SEED, or random (per case)");
  cmp_cmd->add_option("--script", cmp.run.script, "measurement script for every case");
  cmp_cmd->add_option("--conflict-script", cmp.run.conflict_script, "conflict script for every case");
  cmp_cmd->add_option("--actual", cmp.run.actual, "actual diagnosis for every case (default: random)");
  cmp_cmd->add_option("--seed", cmp.run.seed, "seed for random actual diagnoses");
  cmp_cmd->add_flag("--check-invariants", cmp.run.check, "verify tree invariants");
  cmp_cmd->add_option("--csv", cmp.csv, "write per-session rows as CSV");
  cmp_cmd->add_option("--json", cmp.json_out, "write the full report as JSON");

  GenFlags gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate random valid DPIs");
  gen_cmd->add_option("--axioms", gen.spec.axioms, "number of axioms");
  gen_cmd->add_option("--vars", gen.spec.vars, "number of variables");
  gen_cmd->add_option("--max-body", gen.spec.max_body, "literals per rule body (max)");
  gen_cmd->add_option("--max-head", gen.spec.max_head, "literals per rule head (max)");
  gen_cmd->add_option("--negatives", gen.spec.negatives, "random negative measurements");
  gen_cmd->add_option("--positives", gen.spec.positives, "random positive measurements");
  gen_cmd->add_option("--trigger-bias", gen.spec.trigger_bias, "chance a rule body starts with the trigger atom");
  gen_cmd->add_option("--seed", gen.spec.seed, "seed");
  gen_cmd->add_option("--count", gen.count, "number of DPIs (seeds seed, seed+1, ...)");
  gen_cmd->add_option("--out", gen.out, "output file (default stdout)");
  gen_cmd->add_option("--dir", gen.dir, "output directory for --count > 1");

  std::string data = "sessions", host = "127.0.0.1";
  int port = 8080, workers = 2;
  auto* serve_cmd = app.add_subcommand("serve", "serve interactive sessions over HTTP");
  serve_cmd->add_option("--data", data, "session directory");
  serve_cmd->add_option("--host", host, "bind address");
  serve_cmd->add_option("--port", port, "port");
  serve_cmd->add_option("--workers", workers, "engine worker threads");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*replay_cmd) return cmd_replay(replay, replay_log, out);
    if (*cmp_cmd) return cmd_compare(cmp, out);
    if (*gen_cmd) return cmd_gen(gen, out);
    if (*serve_cmd) return cmd_serve(data, host, port, workers, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const logic::ParseError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    err << "invalid DPI: " << e.what() << "\n";
    return kValidation;
  } catch (const OracleError& e) {
    err << "oracle error: " << e.what() << "\n";
    return kOracle;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << "\n";
    return kValidation;
  } catch (const json::exception& e) {
    err << "invalid JSON: " << e.what() << "\n";
    return kValidation;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  return kUsage;
}

}  // namespace dynhs
