#pragma once

#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dynhs/dynamic_hs.hpp"
#include "dynhs/hstree.hpp"

namespace dynhs {

enum class EngineKind { kDynamic, kHsTree };

EngineKind parse_engine(const std::string& text);  // "dynamic" | "hstree"
std::string engine_name(EngineKind kind);

struct SessionConfig {
  EngineKind engine = EngineKind::kDynamic;
  int ld = 5;  // <= 0: no limit (test mode)
  QueueOrder order = QueueOrder::kBreadthFirst;
  std::optional<FaultModel> pr;  // defaults to uniform 0.1
  std::size_t candidate_cap = 4096;
  std::optional<double> stop_probability;  // off by default
  bool check_invariants = false;
  std::vector<Formula> queries;  // dictated measurement sentences, in order
  std::vector<ScriptEntry> conflict_script;

  nlohmann::json to_json() const;
  static SessionConfig from_json(const nlohmann::json& j, int num_axioms);
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Oracle {
 public:
  virtual ~Oracle() = default;
  // Sentences this oracle insists on being asked, in order (may be empty).
  virtual std::vector<Formula> dictated_queries() const { return {}; }
  virtual bool measure(const Formula& query, const Dpi& dpi, const Acquired& acq) = 0;
};

// Answers as a system whose faulty axioms are exactly `actual` would.
class SimulatedOracle : public Oracle {
 public:
  explicit SimulatedOracle(ComponentSet actual) : actual_(std::move(actual)) {}
  bool measure(const Formula& query, const Dpi& dpi, const Acquired& acq) override;

 private:
  ComponentSet actual_;
  logic::Reasoner reasoner_;
};

class ScriptedOracle : public Oracle {
 public:
  explicit ScriptedOracle(std::vector<Measurement> script) : script_(std::move(script)) {}
  std::vector<Formula> dictated_queries() const override;
  bool measure(const Formula& query, const Dpi& dpi, const Acquired& acq) override;

 private:
  std::vector<Measurement> script_;
  std::size_t next_ = 0;
};

// Blocks until another thread calls submit(), or the timeout expires.
class InteractiveOracle : public Oracle {
 public:
  explicit InteractiveOracle(std::chrono::milliseconds timeout) : timeout_(timeout) {}
  bool measure(const Formula& query, const Dpi& dpi, const Acquired& acq) override;
  void submit(bool outcome);
  std::optional<Formula> waiting_on() const;

 private:
  std::chrono::milliseconds timeout_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::optional<Formula> question_;
  std::optional<bool> answer_;
};

std::vector<Measurement> parse_measurement_script(const std::string& json_text);
std::vector<Measurement> load_measurement_script(const std::string& path);

struct IterationRecord {
  int iteration = 0;
  Collection diagnoses;  // emission order
  std::optional<Formula> query;
  std::optional<bool> outcome;
  Collection dcheck;
  Collection dtimes;
  Counters cumulative;
  Counters delta;
  double wall_ms = 0;

  nlohmann::json to_json() const;
  static IterationRecord from_json(const nlohmann::json& j);
};

using SessionLog = std::vector<IterationRecord>;

std::string log_to_ndjson(const SessionLog& log);
// Equal up to wall time.
bool same_log(const SessionLog& a, const SessionLog& b);

// Candidate measurement sentences: atoms v and implications v -> l over the
// DPI variables, deduplicated and capped.
std::vector<Formula> candidate_pool(const Dpi& dpi, std::size_t cap);

struct QueryScore {
  Formula query;
  std::size_t pos, neg, zero;
  std::size_t score() const;
};

// Split-in-half selection. Throws OracleError("indistinguishable ...") when
// no sentence separates the diagnoses.
QueryScore best_measurement(logic::Reasoner& r, const Collection& diagnoses, const Dpi& dpi, const Acquired& acq,
                            std::size_t cap);

QueryScore score_query(logic::Reasoner& r, const Formula& q, const Collection& diagnoses, const Dpi& dpi,
                       const Acquired& acq);

void assign_diags_ok_nok(logic::Reasoner& r, const Collection& diagnoses, const Dpi& dpi, const Acquired& acq,
                         Counters& counters, Collection& dcheck, Collection& dtimes);

enum class SessionStatus { kComputing, kAwaitingAnswer, kDone, kFailed };
std::string status_name(SessionStatus s);
SessionStatus parse_status(const std::string& s);

// The sequential loop, suspended while a measurement is outstanding.
class Session {
 public:
  Session(Dpi dpi, SessionConfig cfg);
  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Runs the first iteration. Throws ValidationError for unusable DPIs.
  void start();
  // Incorporates the answer to the pending query and runs the next iteration.
  void answer(bool outcome);

  SessionStatus status() const { return status_; }
  const std::optional<Formula>& pending() const { return pending_; }
  const Collection& diagnoses() const { return diagnoses_; }
  const SessionLog& log() const { return log_; }
  const Counters& counters() const { return counters_; }
  const Acquired& acquired() const { return acq_; }
  const Dpi& dpi() const { return dpi_; }
  const SessionConfig& config() const { return cfg_; }
  const std::string& error() const { return error_; }
  std::optional<ComponentSet> final_diagnosis() const;
  const TreeTrace& last_trace() const { return trace_; }

  nlohmann::json to_json() const;
  static std::unique_ptr<Session> from_json(const nlohmann::json& j);

 private:
  void compute();
  void fail(const std::string& message);

  Dpi dpi_;
  SessionConfig cfg_;
  logic::Reasoner reasoner_;
  std::shared_ptr<ConflictFinder> finder_;
  Counters counters_;
  std::unique_ptr<DynamicHs> dynamic_;
  Acquired acq_;
  Collection diagnoses_;
  Collection dcheck_, dtimes_;
  std::optional<Formula> pending_;
  SessionStatus status_ = SessionStatus::kComputing;
  std::string error_;
  SessionLog log_;
  TreeTrace trace_;
};

struct SessionResult {
  std::optional<ComponentSet> final_diagnosis;
  SessionLog log;
  Counters counters;
};

// Drives a session to completion. Oracle failures propagate as OracleError.
SessionResult run_session(const Dpi& dpi, SessionConfig cfg, Oracle& oracle);

}  // namespace dynhs
