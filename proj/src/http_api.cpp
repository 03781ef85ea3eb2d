#include <httplib.h>

#include "dynhs/service.hpp"

namespace dynhs {

using nlohmann::json;

namespace {

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ApiError& e) {
      send(res, e.status(), e.body());
    } catch (const json::exception& e) {
      send(res, 400, {{"code", "bad-request"}, {"message", e.what()}});
    } catch (const std::exception& e) {
      send(res, 500, {{"code", "internal"}, {"message", e.what()}});
    }
  };
}

json body_of(const httplib::Request& req) {
  auto j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw ApiError(400, "bad-request", "request body is not valid JSON");
  return j;
}

}  // namespace

void mount_routes(httplib::Server& server, SessionService& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });

  server.Post("/sessions", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send(res, 201, service.create(body_of(req)));
  }));
  server.Get("/sessions", guarded([&](const httplib::Request&, httplib::Response& res) {
    send(res, 200, service.list());
  }));
  server.Get(R"(/sessions/([0-9a-f]+))", guarded([&](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, service.get(req.matches[1]));
  }));
  server.Post(R"(/sessions/([0-9a-f]+)/answer)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    auto [view, fresh] = service.answer(req.matches[1], body_of(req));
    send(res, fresh ? 202 : 200, view);
  }));
  server.Get(R"(/sessions/([0-9a-f]+)/log)", guarded([&](const httplib::Request& req, httplib::Response& res) {
    res.set_content(service.log(req.matches[1]), "application/x-ndjson");
  }));
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) {
      send(res, res.status, {{"code", res.status == 404 ? "not-found" : "error"}, {"message", "no such route"}});
    }
  });
}

}  // namespace dynhs
