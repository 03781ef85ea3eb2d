#include "dynhs/sequential.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace dynhs {

using nlohmann::json;

EngineKind parse_engine(const std::string& text) {
  if (text == "dynamic") return EngineKind::kDynamic;
  if (text == "hstree") return EngineKind::kHsTree;
  throw std::invalid_argument("unknown engine '" + text + "' (dynamic|hstree)");
}

std::string engine_name(EngineKind kind) { return kind == EngineKind::kDynamic ? "dynamic" : "hstree"; }

namespace {

json counters_json(const Counters& c) {
  return {{"fc", c.fc}, {"rd", c.rd}, {"cc_tree", c.cc_tree}, {"cc_session", c.cc_session}};
}

Counters counters_from(const json& j) {
  Counters c;
  c.fc = j.at("fc").get<long>();
  c.rd = j.at("rd").get<long>();
  c.cc_tree = j.at("cc_tree").get<long>();
  c.cc_session = j.at("cc_session").get<long>();
  return c;
}

json sets_json(const Collection& sets) {
  auto out = json::array();
  for (const auto& s : sets) out.push_back(s.diag_str());
  return out;
}

Collection sets_from(const json& j) {
  Collection out;
  for (const auto& s : j) out.push_back(parse_component_set(s.get<std::string>()));
  return out;
}

json formulas_json(const std::vector<Formula>& fs) {
  auto out = json::array();
  for (const auto& f : fs) out.push_back(f.str());
  return out;
}

std::vector<Formula> formulas_from(const json& j) {
  std::vector<Formula> out;
  for (const auto& s : j) out.push_back(logic::parse_formula(s.get<std::string>()));
  return out;
}

json script_json(const std::vector<ScriptEntry>& script) {
  auto out = json::array();
  for (const auto& e : script) {
    json item = {{"universe", e.universe.items()}, {"n_prime", formulas_json(e.n_prime)},
                 {"p_prime", formulas_json(e.p_prime)}};
    item["result"] = e.result ? json(e.result->items()) : json("none");
    out.push_back(std::move(item));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

json SessionConfig::to_json() const {
  json j = {{"engine", engine_name(engine)},
            {"ld", ld},
            {"order", order_name(order)},
            {"candidate_cap", candidate_cap},
            {"check_invariants", check_invariants},
            {"queries", formulas_json(queries)}};
  if (pr) j["pr"] = pr->pr();
  if (stop_probability) j["stop_probability"] = *stop_probability;
  if (!conflict_script.empty()) j["conflict_script"] = script_json(conflict_script);
  return j;
}

SessionConfig SessionConfig::from_json(const json& j, int num_axioms) {
  if (!j.is_object()) throw std::invalid_argument("config must be an object");
  SessionConfig c;
  if (j.contains("engine")) c.engine = parse_engine(j.at("engine").get<std::string>());
  if (j.contains("ld") && !j.at("ld").is_null()) c.ld = j.at("ld").get<int>();
  if (j.contains("order")) c.order = parse_order(j.at("order").get<std::string>());
  if (j.contains("candidate_cap")) c.candidate_cap = j.at("candidate_cap").get<std::size_t>();
  if (j.contains("check_invariants")) c.check_invariants = j.at("check_invariants").get<bool>();
  if (j.contains("stop_probability")) c.stop_probability = j.at("stop_probability").get<double>();
  if (j.contains("queries")) c.queries = formulas_from(j.at("queries"));
  if (j.contains("conflict_script")) c.conflict_script = parse_conflict_script(j.at("conflict_script").dump());
  if (j.contains("pr")) {
    const auto& p = j.at("pr");
    if (p.is_array()) {
      c.pr = FaultModel(p.get<std::vector<double>>());
    } else if (p.is_object() && p.contains("random")) {
      c.pr = FaultModel::random(num_axioms, p.at("random").get<unsigned>());
    } else {
      throw std::invalid_argument("pr must be a list or {\"random\": seed}");
    }
    if (c.pr->size() != num_axioms) throw std::invalid_argument("pr needs one value per axiom");
  }
  if (c.ld == 1) throw std::invalid_argument("ld must be at least 2");
  return c;
}

bool SimulatedOracle::measure(const Formula& query, const Dpi& dpi, const Acquired& acq) {
  std::vector<Formula> kb = dpi.select(full_set(dpi.size()).minus(actual_));
  kb.insert(kb.end(), dpi.background.begin(), dpi.background.end());
  kb.insert(kb.end(), dpi.positive.begin(), dpi.positive.end());
  kb.insert(kb.end(), acq.positive.begin(), acq.positive.end());
  return reasoner_.entails(kb, query);
}

std::vector<Formula> ScriptedOracle::dictated_queries() const {
  std::vector<Formula> out;
  for (const auto& m : script_) out.push_back(m.sentence);
  return out;
}

bool ScriptedOracle::measure(const Formula& query, const Dpi&, const Acquired&) {
  if (next_ >= script_.size()) throw OracleError("measurement script exhausted at '" + query.str() + "'");
  const auto& m = script_[next_];
  if (!(m.sentence == query)) {
    throw OracleError("script expects '" + m.sentence.str() + "' but was asked '" + query.str() + "'");
  }
  ++next_;
  return m.outcome;
}

bool InteractiveOracle::measure(const Formula& query, const Dpi&, const Acquired&) {
  std::unique_lock lock(mu_);
  question_ = query;
  answer_.reset();
  if (!cv_.wait_for(lock, timeout_, [&] { return answer_.has_value(); })) {
    question_.reset();
    throw OracleError("no answer to '" + query.str() + "' within timeout");
  }
  bool out = *answer_;
  question_.reset();
  answer_.reset();
  return out;
}

void InteractiveOracle::submit(bool outcome) {
  {
    std::lock_guard lock(mu_);
    if (!question_) throw std::logic_error("no pending question");
    answer_ = outcome;
  }
  cv_.notify_all();
}

std::optional<Formula> InteractiveOracle::waiting_on() const {
  std::lock_guard lock(mu_);
  return question_;
}

std::vector<Measurement> parse_measurement_script(const std::string& json_text) {
  auto doc = json::parse(json_text);
  if (!doc.is_array()) throw std::invalid_argument("measurement script must be a JSON list");
  std::vector<Measurement> out;
  for (const auto& item : doc) {
    out.push_back({logic::parse_formula(item.at("sentence").get<std::string>()), item.at("outcome").get<bool>()});
  }
  return out;
}

std::vector<Measurement> load_measurement_script(const std::string& path) {
  return parse_measurement_script(read_file(path));
}

json IterationRecord::to_json() const {
  return {{"iteration", iteration},
          {"diagnoses", sets_json(diagnoses)},
          {"query", query ? json(query->str()) : json(nullptr)},
          {"outcome", outcome ? json(*outcome) : json(nullptr)},
          {"dcheck", sets_json(dcheck)},
          {"dtimes", sets_json(dtimes)},
          {"counters", counters_json(cumulative)},
          {"delta", counters_json(delta)},
          {"wall_ms", wall_ms}};
}

IterationRecord IterationRecord::from_json(const json& j) {
  IterationRecord r;
  r.iteration = j.at("iteration").get<int>();
  r.diagnoses = sets_from(j.at("diagnoses"));
  if (!j.at("query").is_null()) r.query = logic::parse_formula(j.at("query").get<std::string>());
  if (!j.at("outcome").is_null()) r.outcome = j.at("outcome").get<bool>();
  r.dcheck = sets_from(j.at("dcheck"));
  r.dtimes = sets_from(j.at("dtimes"));
  r.cumulative = counters_from(j.at("counters"));
  r.delta = counters_from(j.at("delta"));
  r.wall_ms = j.at("wall_ms").get<double>();
  return r;
}

std::string log_to_ndjson(const SessionLog& log) {
  std::string out;
  for (const auto& r : log) out += r.to_json().dump() + "\n";
  return out;
}

bool same_log(const SessionLog& a, const SessionLog& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    json x = a[i].to_json(), y = b[i].to_json();
    x.erase("wall_ms");
    y.erase("wall_ms");
    if (x != y) return false;
  }
  return true;
}

std::vector<Formula> candidate_pool(const Dpi& dpi, std::size_t cap) {
  std::set<std::string> names;
  for (const auto* part : {&dpi.axioms, &dpi.background, &dpi.positive, &dpi.negative}) {
    for (const auto& f : *part) f.collect_variables(names);
  }
  std::vector<Formula> out;
  std::set<std::string> seen;
  auto add = [&](Formula f) {
    if (out.size() < cap && seen.insert(f.key()).second) out.push_back(std::move(f));
  };
  for (const auto& v : names) add(Formula::var(v));
  for (const auto& v : names) {
    for (const auto& w : names) {
      if (v == w) continue;
      add(Formula::implication(Formula::var(v), Formula::var(w)));
      add(Formula::implication(Formula::var(v), Formula::negation(Formula::var(w))));
    }
  }
  return out;
}

std::size_t QueryScore::score() const { return (pos > neg ? pos - neg : neg - pos) + zero; }

namespace {

std::vector<Formula> residual(const Dpi& dpi, const Acquired& acq, const ComponentSet& d) {
  std::vector<Formula> kb = dpi.select(full_set(dpi.size()).minus(d));
  kb.insert(kb.end(), dpi.background.begin(), dpi.background.end());
  kb.insert(kb.end(), dpi.positive.begin(), dpi.positive.end());
  kb.insert(kb.end(), acq.positive.begin(), acq.positive.end());
  return kb;
}

QueryScore score_with(logic::Reasoner& r, const Formula& q, const std::vector<std::vector<Formula>>& kbs,
                      const Dpi& dpi, const Acquired& acq) {
  QueryScore s{q, 0, 0, 0};
  std::vector<Formula> one{q};
  for (const auto& kb : kbs) {
    if (r.entails(kb, q)) {
      ++s.pos;
      continue;
    }
    bool refuted = !r.is_consistent(kb, one);
    for (const auto* ns : {&dpi.negative, &acq.negative}) {
      for (const auto& n : *ns) refuted = refuted || r.entails(kb, one, n);
    }
    if (refuted) ++s.neg;
    else ++s.zero;
  }
  return s;
}

bool better(const QueryScore& a, const std::optional<QueryScore>& b) {
  if (!b) return true;
  if (a.score() != b->score()) return a.score() < b->score();
  return a.query.str() < b->query.str();
}

}  // namespace

QueryScore score_query(logic::Reasoner& r, const Formula& q, const Collection& diagnoses, const Dpi& dpi,
                       const Acquired& acq) {
  std::vector<std::vector<Formula>> kbs;
  for (const auto& d : diagnoses) kbs.push_back(residual(dpi, acq, d));
  return score_with(r, q, kbs, dpi, acq);
}

QueryScore best_measurement(logic::Reasoner& r, const Collection& diagnoses, const Dpi& dpi, const Acquired& acq,
                            std::size_t cap) {
  std::vector<std::vector<Formula>> kbs;
  for (const auto& d : diagnoses) kbs.push_back(residual(dpi, acq, d));
  std::vector<Formula> base = residual(dpi, acq, full_set(dpi.size()));

  std::optional<QueryScore> best;
  for (const auto& q : candidate_pool(dpi, cap)) {
    if (acq.contains(q)) continue;
    if (r.entails(base, q) || r.entails(base, Formula::negation(q))) continue;
    auto s = score_with(r, q, kbs, dpi, acq);
    if (s.pos > 0 && s.neg > 0 && better(s, best)) best = s;
  }
  if (!best) {
    // Residual knowledge bases always separate distinct minimal diagnoses.
    for (const auto& d : diagnoses) {
      Formula q = Formula::conjunction(dpi.select(full_set(dpi.size()).minus(d)));
      if (acq.contains(q)) continue;
      auto s = score_with(r, q, kbs, dpi, acq);
      if (s.pos > 0 && s.neg > 0 && better(s, best)) best = s;
    }
  }
  if (!best) throw OracleError("indistinguishable diagnoses " + format_diagnoses(diagnoses));
  return *best;
}

void assign_diags_ok_nok(logic::Reasoner& r, const Collection& diagnoses, const Dpi& dpi, const Acquired& acq,
                         Counters& counters, Collection& dcheck, Collection& dtimes) {
  dcheck.clear();
  dtimes.clear();
  for (const auto& d : diagnoses) {
    ++counters.cc_session;
    (is_diagnosis(r, dpi, acq, d) ? dcheck : dtimes).push_back(d);
  }
}

std::string status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::kComputing: return "computing";
    case SessionStatus::kAwaitingAnswer: return "awaiting-answer";
    case SessionStatus::kDone: return "done";
    case SessionStatus::kFailed: return "failed";
  }
  return "failed";
}

SessionStatus parse_status(const std::string& s) {
  if (s == "computing") return SessionStatus::kComputing;
  if (s == "awaiting-answer") return SessionStatus::kAwaitingAnswer;
  if (s == "done") return SessionStatus::kDone;
  if (s == "failed") return SessionStatus::kFailed;
  throw std::invalid_argument("unknown status '" + s + "'");
}

namespace {

EngineConfig engine_config(const SessionConfig& cfg, int n) {
  EngineConfig e;
  e.ld = cfg.ld;
  e.order = cfg.order;
  e.pr = cfg.pr ? *cfg.pr : FaultModel::uniform(n);
  e.check_invariants = cfg.check_invariants;
  return e;
}

}  // namespace

Session::Session(Dpi dpi, SessionConfig cfg) : dpi_(std::move(dpi)), cfg_(std::move(cfg)) {
  if (!cfg_.pr) cfg_.pr = FaultModel::uniform(dpi_.size());
  if (cfg_.pr->size() != dpi_.size()) throw std::invalid_argument("pr needs one value per axiom");
  finder_ = std::make_shared<QuickXplainFinder>(reasoner_);
  if (!cfg_.conflict_script.empty()) finder_ = std::make_shared<ScriptedFinder>(reasoner_, cfg_.conflict_script, finder_);
  if (cfg_.engine == EngineKind::kDynamic) {
    dynamic_ = std::make_unique<DynamicHs>(dpi_, engine_config(cfg_, dpi_.size()), *finder_, counters_);
  }
}

void Session::start() {
  validate_for_session(reasoner_, dpi_);
  compute();
}

void Session::fail(const std::string& message) {
  status_ = SessionStatus::kFailed;
  error_ = message;
  pending_.reset();
}

std::optional<ComponentSet> Session::final_diagnosis() const {
  if (status_ != SessionStatus::kDone || diagnoses_.empty()) return std::nullopt;
  return diagnoses_.front();
}

void Session::compute() {
  status_ = SessionStatus::kComputing;
  auto t0 = std::chrono::steady_clock::now();
  Counters before = log_.empty() ? Counters{} : log_.back().cumulative;
  IterationRecord rec;
  rec.iteration = static_cast<int>(log_.size()) + 1;

  try {
    if (dynamic_) {
      diagnoses_ = dynamic_->run(acq_, dcheck_, dtimes_);
      trace_ = dynamic_->trace();
    } else {
      trace_.clear();
      diagnoses_ = run_hs_tree(dpi_, acq_, engine_config(cfg_, dpi_.size()), *finder_, counters_, &trace_);
    }
    rec.diagnoses = diagnoses_;

    bool stop = diagnoses_.size() <= 1;
    if (!stop && cfg_.stop_probability) {
      double total = 0, top = 0;
      for (const auto& d : diagnoses_) {
        double p = cfg_.pr->probability(d);
        total += p;
        top = std::max(top, p);
      }
      stop = top / total >= *cfg_.stop_probability;
      if (stop) {
        std::stable_sort(diagnoses_.begin(), diagnoses_.end(), [&](const ComponentSet& a, const ComponentSet& b) {
          return cfg_.pr->probability(a) > cfg_.pr->probability(b);
        });
      }
    }

    if (diagnoses_.empty()) {
      fail("no diagnosis exists");
    } else if (stop) {
      status_ = SessionStatus::kDone;
    } else {
      std::size_t idx = acq_.size();
      Formula q = idx < cfg_.queries.size() ? cfg_.queries[idx]
                                            : best_measurement(reasoner_, diagnoses_, dpi_, acq_, cfg_.candidate_cap).query;
      if (acq_.contains(q)) throw OracleError("query '" + q.str() + "' was already measured");
      pending_ = q;
      rec.query = q;
      status_ = SessionStatus::kAwaitingAnswer;
    }
  } catch (const OracleError& e) {
    fail(e.what());
  } catch (const InvariantViolation& e) {
    fail(std::string("invariant violation: ") + e.what());
  } catch (const std::logic_error& e) {
    fail(std::string("internal error: ") + e.what());
  }

  rec.cumulative = counters_;
  rec.delta = counters_ - before;
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  log_.push_back(std::move(rec));
}

void Session::answer(bool outcome) {
  if (status_ != SessionStatus::kAwaitingAnswer || !pending_) throw std::logic_error("no pending question");
  Formula q = *pending_;
  log_.back().outcome = outcome;
  acq_ = add_measurement(acq_, {q, outcome});
  pending_.reset();
  if (is_faulty(reasoner_, dpi_, acq_, {})) {
    fail("contradiction: the measurements so far rule out every diagnosis");
    throw OracleError(error_);
  }
  assign_diags_ok_nok(reasoner_, diagnoses_, dpi_, acq_, counters_, dcheck_, dtimes_);
  log_.back().dcheck = dcheck_;
  log_.back().dtimes = dtimes_;
  compute();
}

json Session::to_json() const {
  json j = {{"dpi", format_dpi(dpi_)},
            {"config", cfg_.to_json()},
            {"p_prime", formulas_json(acq_.positive)},
            {"n_prime", formulas_json(acq_.negative)},
            {"diagnoses", sets_json(diagnoses_)},
            {"dcheck", sets_json(dcheck_)},
            {"dtimes", sets_json(dtimes_)},
            {"status", status_name(status_)},
            {"error", error_},
            {"counters", counters_json(counters_)}};
  j["pending"] = pending_ ? json(pending_->str()) : json(nullptr);
  auto log = json::array();
  for (const auto& r : log_) log.push_back(r.to_json());
  j["log"] = log;
  if (dynamic_) j["state"] = state_to_json(dynamic_->state());
  return j;
}

std::unique_ptr<Session> Session::from_json(const json& j) {
  Dpi dpi = parse_dpi(j.at("dpi").get<std::string>());
  SessionConfig cfg = SessionConfig::from_json(j.at("config"), dpi.size());
  auto s = std::make_unique<Session>(std::move(dpi), std::move(cfg));
  s->acq_.positive = formulas_from(j.at("p_prime"));
  s->acq_.negative = formulas_from(j.at("n_prime"));
  s->diagnoses_ = sets_from(j.at("diagnoses"));
  s->dcheck_ = sets_from(j.at("dcheck"));
  s->dtimes_ = sets_from(j.at("dtimes"));
  s->status_ = parse_status(j.at("status").get<std::string>());
  s->error_ = j.at("error").get<std::string>();
  s->counters_ = counters_from(j.at("counters"));
  if (!j.at("pending").is_null()) s->pending_ = logic::parse_formula(j.at("pending").get<std::string>());
  for (const auto& r : j.at("log")) s->log_.push_back(IterationRecord::from_json(r));
  if (s->dynamic_) {
    s->dynamic_ = std::make_unique<DynamicHs>(s->dpi_, engine_config(s->cfg_, s->dpi_.size()), *s->finder_,
                                              s->counters_, state_from_json(j.at("state")));
  }
  return s;
}

SessionResult run_session(const Dpi& dpi, SessionConfig cfg, Oracle& oracle) {
  if (cfg.queries.empty()) cfg.queries = oracle.dictated_queries();
  Session s(dpi, std::move(cfg));
  s.start();
  while (s.status() == SessionStatus::kAwaitingAnswer) {
    bool outcome = oracle.measure(*s.pending(), s.dpi(), s.acquired());
    s.answer(outcome);
  }
  if (s.status() == SessionStatus::kFailed) throw OracleError(s.error());
  return {s.final_diagnosis(), s.log(), s.counters()};
}

}  // namespace dynhs
