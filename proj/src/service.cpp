#include "dynhs/service.hpp"

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace dynhs {

using nlohmann::json;

struct SessionService::Entry {
  std::string id;
  // Guards everything below except the session while a job runs. At most
  // one job per session exists: the start, or an accepted answer.
  std::mutex meta;
  std::unique_ptr<Session> session;
  std::map<std::string, bool> keys;  // idempotency key -> outcome
  std::optional<std::pair<std::string, bool>> inflight;  // answer being computed
  bool started = false;

  mutable std::mutex snap_mu;
  mutable std::condition_variable snap_cv;
  std::shared_ptr<const json> view;
  std::string ndjson;
};

namespace {

json view_of(const std::string& id, const Session& s, bool computing) {
  json diags = json::array();
  double total = 0;
  for (const auto& d : s.diagnoses()) total += s.config().pr->probability(d);
  for (const auto& d : s.diagnoses()) {
    double p = s.config().pr->probability(d);
    diags.push_back({{"set", d.axiom_str()}, {"ids", d.items()}, {"probability", total > 0 ? p / total : 0.0}});
  }
  json history = json::array();
  for (const auto& r : s.log()) history.push_back(r.to_json());
  auto fin = s.final_diagnosis();
  SessionStatus st = computing ? SessionStatus::kComputing : s.status();
  json pending = nullptr;
  if (!computing && s.pending()) pending = s.pending()->str();
  return {{"id", id},
          {"status", status_name(st)},
          {"engine", engine_name(s.config().engine)},
          {"iteration", s.log().size()},
          {"diagnoses", diags},
          {"pending", pending},
          {"final", fin ? json(fin->axiom_str()) : json(nullptr)},
          {"counters",
           {{"fc", s.counters().fc},
            {"rd", s.counters().rd},
            {"cc_tree", s.counters().cc_tree},
            {"cc_session", s.counters().cc_session}}},
          {"error", s.error()},
          {"history", history}};
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

SessionService::SessionService(std::filesystem::path dir, Options opts)
    : dir_(std::move(dir)), opts_(opts), rng_(std::random_device{}()) {
  std::filesystem::create_directories(dir_);
  if (opts_.async) {
    for (int i = 0; i < std::max(1, opts_.workers); ++i) {
      pool_.emplace_back([this] {
        for (;;) {
          std::function<void()> job;
          {
            std::unique_lock lock(qmu_);
            qcv_.wait(lock, [&] { return stopping_ || !jobs_.empty(); });
            if (jobs_.empty()) return;
            job = std::move(jobs_.front());
            jobs_.pop_front();
          }
          job();
        }
      });
    }
  }
  load_existing();
}

SessionService::~SessionService() {
  {
    std::lock_guard lock(qmu_);
    stopping_ = true;
  }
  qcv_.notify_all();
  for (auto& t : pool_) t.join();
}

std::string SessionService::new_id() {
  std::lock_guard lock(mu_);
  for (;;) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << rng_();
    if (!sessions_.count(out.str())) return out.str();
  }
}

std::shared_ptr<SessionService::Entry> SessionService::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ApiError(404, "not-found", "no session '" + id + "'");
  return it->second;
}

void SessionService::publish(Entry& e) {
  json doc = {{"id", e.id}, {"session", e.session->to_json()}, {"keys", e.keys}, {"started", e.started}};
  if (e.inflight) doc["inflight"] = {{"key", e.inflight->first}, {"outcome", e.inflight->second}};
  write_atomically(dir_ / (e.id + ".json"), doc.dump());

  bool computing = !e.started || e.inflight.has_value();
  auto v = std::make_shared<const json>(view_of(e.id, *e.session, computing));
  {
    std::lock_guard lock(e.snap_mu);
    e.view = std::move(v);
    e.ndjson = log_to_ndjson(e.session->log());
  }
  e.snap_cv.notify_all();
}

void SessionService::run_job(const std::shared_ptr<Entry>& e, const std::function<void()>& job) {
  try {
    job();
  } catch (const std::exception&) {
    // failures are recorded in the session itself
  }
  std::lock_guard lock(e->meta);
  e->started = true;
  e->inflight.reset();
  publish(*e);
}

void SessionService::schedule(std::shared_ptr<Entry> e, std::function<void()> job) {
  if (!opts_.async) {
    run_job(e, job);
    return;
  }
  {
    std::lock_guard lock(qmu_);
    jobs_.push_back([this, e, job = std::move(job)] { run_job(e, job); });
  }
  qcv_.notify_one();
}

json SessionService::create(const json& request) {
  if (!request.is_object() || !request.contains("dpi") || !request.at("dpi").is_string()) {
    throw ApiError(400, "bad-request", "expected {\"dpi\": text, \"config\": {...}}");
  }
  Dpi dpi;
  try {
    dpi = parse_dpi(request.at("dpi").get<std::string>());
    logic::Reasoner r;
    validate_for_session(r, dpi);
  } catch (const logic::ParseError& e) {
    throw ApiError(400, "invalid-dpi", e.what());
  } catch (const ValidationError& e) {
    throw ApiError(400, "invalid-dpi", e.what());
  } catch (const std::invalid_argument& e) {
    throw ApiError(400, "invalid-dpi", e.what());
  }
  SessionConfig cfg;
  try {
    cfg = SessionConfig::from_json(request.value("config", json::object()), dpi.size());
  } catch (const std::exception& e) {
    throw ApiError(400, "invalid-config", e.what());
  }

  auto e = std::make_shared<Entry>();
  e->id = new_id();
  e->session = std::make_unique<Session>(std::move(dpi), std::move(cfg));
  {
    std::lock_guard lock(e->meta);
    publish(*e);
  }
  {
    std::lock_guard lock(mu_);
    sessions_[e->id] = e;
  }
  schedule(e, [e] { e->session->start(); });
  return get(e->id);
}

json SessionService::get(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->snap_mu);
  return *e->view;
}

std::string SessionService::log(const std::string& id) const {
  auto e = find(id);
  std::lock_guard lock(e->snap_mu);
  return e->ndjson;
}

json SessionService::list() const {
  std::vector<std::shared_ptr<Entry>> all;
  {
    std::lock_guard lock(mu_);
    for (const auto& [id, e] : sessions_) all.push_back(e);
  }
  json out = json::array();
  for (const auto& e : all) {
    std::lock_guard lock(e->snap_mu);
    out.push_back({{"id", e->id}, {"status", e->view->at("status")}, {"iteration", e->view->at("iteration")}});
  }
  return out;
}

std::pair<json, bool> SessionService::answer(const std::string& id, const json& request) {
  if (!request.is_object() || !request.contains("outcome") || !request.at("outcome").is_boolean()) {
    throw ApiError(400, "bad-request", "expected {\"outcome\": bool, \"idempotency_key\": string}");
  }
  if (!request.contains("idempotency_key") || !request.at("idempotency_key").is_string() ||
      request.at("idempotency_key").get<std::string>().empty()) {
    throw ApiError(400, "bad-request", "idempotency_key is required");
  }
  bool outcome = request.at("outcome").get<bool>();
  std::string key = request.at("idempotency_key").get<std::string>();
  auto e = find(id);
  {
    std::lock_guard lock(e->meta);
    auto seen = e->keys.find(key);
    if (seen != e->keys.end()) {
      if (seen->second != outcome) throw ApiError(409, "idempotency-conflict", "key reused with a different outcome");
      return {get(id), false};
    }
    if (!e->started || e->inflight) throw ApiError(409, "not-awaiting", "session is computing");
    if (e->session->status() != SessionStatus::kAwaitingAnswer) {
      throw ApiError(409, "not-awaiting", "session is " + status_name(e->session->status()));
    }
    e->keys[key] = outcome;
    e->inflight = std::make_pair(key, outcome);
    publish(*e);
  }
  schedule(e, [e, outcome] { e->session->answer(outcome); });
  return {get(id), true};
}

json SessionService::wait(const std::string& id, std::chrono::milliseconds timeout) const {
  auto e = find(id);
  std::unique_lock lock(e->snap_mu);
  e->snap_cv.wait_for(lock, timeout, [&] { return e->view->at("status") != "computing"; });
  return *e->view;
}

void SessionService::load_existing() {
  for (const auto& file : std::filesystem::directory_iterator(dir_)) {
    if (file.path().extension() != ".json") continue;
    std::ifstream in(file.path());
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.contains("session")) continue;
    auto e = std::make_shared<Entry>();
    e->id = doc.at("id").get<std::string>();
    e->session = Session::from_json(doc.at("session"));
    e->keys = doc.value("keys", std::map<std::string, bool>{});
    e->started = doc.value("started", true);
    std::optional<bool> resume;
    if (doc.contains("inflight")) resume = doc.at("inflight").at("outcome").get<bool>();
    if (resume) e->inflight = std::make_pair(doc.at("inflight").at("key").get<std::string>(), *resume);
    {
      std::lock_guard lock(e->meta);
      publish(*e);
    }
    {
      std::lock_guard lock(mu_);
      sessions_[e->id] = e;
    }
    // Work interrupted by a restart is redone from the persisted state.
    if (!e->started) {
      schedule(e, [e] { e->session->start(); });
    } else if (resume) {
      bool outcome = *resume;
      schedule(e, [e, outcome] { e->session->answer(outcome); });
    }
  }
}

}  // namespace dynhs
