#include "recourse/service.hpp"

#include "recourse/error.hpp"

#include <httplib.h>

#include <semaphore>
#include <thread>

namespace recourse {

namespace {

Json parse_body(const std::string& body) {
  try {
    Json j = Json::parse(body.empty() ? "{}" : body);
    if (!j.is_object()) throw MalformedRequest("request body must be a JSON object");
    return j;
  } catch (const Json::parse_error& e) {
    throw MalformedRequest(std::string("invalid JSON: ") + e.what());
  }
}

template <typename T>
std::optional<T> optional_int(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  if (!j.at(key).is_number_integer()) throw MalformedRequest(std::string(key) + " must be an integer");
  return j.at(key).get<T>();
}

Instance request_instance(const Workspace& ws, const Json& body) {
  if (!body.contains("instance")) throw MalformedRequest("missing field 'instance'");
  return instance_from_json(body.at("instance"), ws.schema());
}

Json results_json(const Workspace& ws, const std::vector<CfeResult>& results) {
  Json out;
  Json arr = Json::array();
  for (const auto& r : results) arr.push_back(to_json(r, ws.schema()));
  out["results"] = std::move(arr);
  return out;
}

std::size_t request_limit(const Json& body) {
  auto limit = optional_int<long long>(body, "limit");
  if (!limit) return 64;
  if (*limit <= 0) throw MalformedRequest("limit must be positive");
  return static_cast<std::size_t>(*limit);
}

Json dispatch(const Workspace& ws, const Request& req) {
  const Model& m = ws.model();
  if (req.path == "/api/health") return Json{{"ok", true}};
  if (req.path == "/api/schema") {
    Json out = to_json(ws.schema());
    out["decision"] = {{"predicate", m.decision().predicate},
                       {"features", m.decision().features},
                       {"undesired", m.decision().undesired},
                       {"desired", m.decision().desired}};
    return out;
  }
  Json body = parse_body(req.body);
  if (req.path == "/api/classify") return to_json(classify(m, request_instance(ws, body)));
  if (req.path == "/api/explain") {
    Instance inst = request_instance(ws, body);
    ControlSpec spec = controls_from_json(body.value("controls", Json()));
    auto cost = optional_int<int>(body, "cost");
    return results_json(ws, counterfactuals(m, inst, spec, cost, request_limit(body)));
  }
  if (req.path == "/api/interpolant") {
    Instance inst = request_instance(ws, body);
    ControlSpec spec = controls_from_json(body.value("controls", Json()));
    return to_json(craig_interpolant(m, inst, spec), ws.schema());
  }
  if (req.path == "/api/enumerate") {
    ControlSpec spec = controls_from_json(body.value("controls", Json()));
    return results_json(ws, enumerate_transitions(m, request_limit(body), spec));
  }
  throw std::out_of_range(req.path);
}

bool known_route(const Request& req) {
  static const std::vector<std::pair<std::string, std::string>> routes{
      {"GET", "/api/health"},      {"GET", "/api/schema"},       {"POST", "/api/classify"},
      {"POST", "/api/explain"},    {"POST", "/api/interpolant"}, {"POST", "/api/enumerate"}};
  for (const auto& [method, path] : routes) {
    if (path == req.path && method == req.method) return true;
  }
  return false;
}

}  // namespace

Response handle(const Workspace& ws, const Request& req) {
  Response res;
  if (!known_route(req)) {
    res.status = 404;
    res.body = error_json(ErrorCode::usage, "no route " + req.method + " " + req.path).dump();
    return res;
  }
  try {
    res.body = dispatch(ws, req).dump();
  } catch (const MalformedRequest& e) {
    res.status = 422;
    res.body = error_json(e.code(), e.what()).dump();
  } catch (const Error& e) {
    res.status = e.code() == ErrorCode::internal ? 500 : 400;
    res.body = error_json(e.code(), e.what()).dump();
  } catch (const std::exception& e) {
    res.status = 500;
    res.body = error_json(ErrorCode::internal, e.what()).dump();
  }
  return res;
}

struct Server::Impl {
  const Workspace& ws;
  ServeOptions options;
  httplib::Server http;
  std::counting_semaphore<> slots;
  std::thread worker;

  Impl(const Workspace& w, ServeOptions o)
      : ws(w), options(std::move(o)),
        slots(static_cast<std::ptrdiff_t>(options.max_concurrent ? options.max_concurrent
                                                                 : std::max(1u, std::thread::hardware_concurrency()))) {
    auto serve = [this](const httplib::Request& hreq, httplib::Response& hres) {
      slots.acquire();
      Response r = handle(ws, Request{hreq.method, hreq.path, hreq.body});
      slots.release();
      hres.status = r.status;
      hres.set_content(r.body, "application/json");
    };
    // Plain SO_REUSEADDR: a second server on a busy port must fail to bind.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    });
    http.set_error_handler([](const httplib::Request& hreq, httplib::Response& hres) {
      if (!hres.body.empty()) return;
      hres.set_content(error_json(ErrorCode::usage, "no route for " + hreq.method + " " + hreq.path).dump(),
                       "application/json");
    });
    for (const char* path : {"/api/health", "/api/schema"}) http.Get(path, serve);
    for (const char* path : {"/api/classify", "/api/explain", "/api/interpolant", "/api/enumerate"}) {
      http.Post(path, serve);
    }
  }

  int bind() {
    int port = options.port == 0 ? http.bind_to_any_port(options.host)
                                 : (http.bind_to_port(options.host, options.port) ? options.port : -1);
    if (port < 0) {
      throw Error(ErrorCode::io, "cannot bind " + options.host + ":" + std::to_string(options.port));
    }
    return port;
  }
};

Server::Server(const Workspace& ws, ServeOptions options)
    : impl_(std::make_unique<Impl>(ws, std::move(options))) {}

Server::~Server() { stop(); }

int Server::start() {
  int port = impl_->bind();
  impl_->worker = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return port;
}

void Server::run() {
  impl_->bind();
  impl_->http.listen_after_bind();
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

}  // namespace recourse
