#include "reframe/service/http_api.hpp"

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "reframe/core/error.hpp"
#include "reframe/core/log.hpp"

namespace reframe::service {

namespace {

constexpr const char* kJson = "application/json";

void send(httplib::Response& res, int status, const nlohmann::json& body)
{
  res.status = status;
  res.set_content(body.dump(), kJson);
}

nlohmann::json parse_body(const httplib::Request& req)
{
  if (req.body.empty()) return nlohmann::json::object();
  try {
    return nlohmann::json::parse(req.body);
  }
  catch (const nlohmann::json::parse_error&) {
    throw Error(ErrorCode::InvalidInput, "request body is not valid JSON");
  }
}

template <typename Fn>
httplib::Server::Handler guarded(int success_status, Fn fn)
{
  return [success_status, fn](const httplib::Request& req, httplib::Response& res) {
    try {
      send(res, success_status, fn(req));
    }
    catch (const Error& e) {
      send(res, http_status(e.code()), error_body(e.code(), e.what()));
    }
    catch (const std::exception& e) {
      log::warn(std::string("unhandled error: ") + e.what());
      res.status = 500;
      res.set_content(nlohmann::json{{"code", "Internal"}, {"message", "internal error"}, {"retryable", false}}.dump(),
                      kJson);
    }
  };
}

}  // namespace

void mount_api(httplib::Server& server, Service& service)
{
  const std::string session = R"(/api/v1/sessions/([A-Za-z0-9_-]+))";
  server.Get("/api/v1/health", guarded(200, [&service](const httplib::Request&) { return service.health(); }));
  server.Post("/api/v1/sessions",
              guarded(201, [&service](const httplib::Request& req) { return service.create_session(parse_body(req)); }));
  server.Post(session + "/thought", guarded(200, [&service](const httplib::Request& req) {
                return service.submit_thought(req.matches[1], parse_body(req));
              }));
  server.Post(session + "/reframes", guarded(200, [&service](const httplib::Request& req) {
                return service.request_reframes(req.matches[1], parse_body(req));
              }));
  server.Post(session + "/selection", guarded(200, [&service](const httplib::Request& req) {
                return service.submit_selection(req.matches[1], parse_body(req));
              }));
  server.Post(session + "/rating", guarded(200, [&service](const httplib::Request& req) {
                return service.submit_rating(req.matches[1], parse_body(req));
              }));
  server.Post(session + "/flag", guarded(200, [&service](const httplib::Request& req) {
                return service.flag(req.matches[1], parse_body(req));
              }));
}

void serve(Service& service, const std::string& host, int port)
{
  httplib::Server server;
  mount_api(server, service);

  std::mutex mu;
  std::condition_variable cv;
  bool stopping = false;
  std::thread sweeper([&] {
    std::unique_lock lock(mu);
    while (!cv.wait_for(lock, std::chrono::seconds(30), [&] { return stopping; })) service.expire_idle();
  });

  log::info("listening on " + host + ":" + std::to_string(port));
  const bool ok = server.listen(host, port);
  {
    std::lock_guard lock(mu);
    stopping = true;
  }
  cv.notify_all();
  sweeper.join();
  if (!ok) throw Error(ErrorCode::InvalidInput, "cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace reframe::service
