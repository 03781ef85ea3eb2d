#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "dynhs/sequential.hpp"

namespace dynhs {

class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  nlohmann::json body() const { return {{"code", code_}, {"message", what()}}; }

 private:
  int status_;
  std::string code_;
};

// Interactive sessions persisted as one JSON file each under `dir`.
// Mutations of one session are serialized; reads return the last published
// snapshot and never wait for a running engine.
class SessionService {
 public:
  struct Options {
    bool async = true;
    int workers = 2;
  };

  SessionService(std::filesystem::path dir, Options opts);
  explicit SessionService(std::filesystem::path dir) : SessionService(std::move(dir), Options{}) {}
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  nlohmann::json create(const nlohmann::json& request);
  nlohmann::json get(const std::string& id) const;
  // Returns the view and whether the answer was newly accepted (false for a
  // replayed idempotency key).
  std::pair<nlohmann::json, bool> answer(const std::string& id, const nlohmann::json& request);
  std::string log(const std::string& id) const;
  nlohmann::json list() const;

  // Blocks until the session is not computing or the timeout expires.
  nlohmann::json wait(const std::string& id, std::chrono::milliseconds timeout) const;

 private:
  struct Entry;

  std::shared_ptr<Entry> find(const std::string& id) const;
  void schedule(std::shared_ptr<Entry> e, std::function<void()> job);
  void run_job(const std::shared_ptr<Entry>& e, const std::function<void()>& job);
  void publish(Entry& e);  // caller holds e.work
  void load_existing();
  std::string new_id();

  std::filesystem::path dir_;
  Options opts_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::mt19937_64 rng_;

  std::mutex qmu_;
  std::condition_variable qcv_;
  std::deque<std::function<void()>> jobs_;
  bool stopping_ = false;
  std::vector<std::thread> pool_;
};

}  // namespace dynhs

namespace httplib {
class Server;
}

namespace dynhs {

void mount_routes(httplib::Server& server, SessionService& service);

}  // namespace dynhs
