#pragma once

#include "recourse/workspace.hpp"

#include <memory>
#include <string>

namespace recourse {

struct Request {
  std::string method;
  std::string path;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  // application/json
};

/// Stateless request dispatcher shared by the HTTP server and `--json` CLI
/// output. Domain errors map to 400, malformed bodies to 422.
Response handle(const Workspace& ws, const Request& request);

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;              // 0 picks a free port
  unsigned max_concurrent = 0;  // 0 = hardware concurrency
};

class Server {
 public:
  Server(const Workspace& ws, ServeOptions options);
  ~Server();

  /// Binds and serves on a background thread; returns the bound port.
  /// Throws Error(io) when the port is unavailable.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace recourse
