#pragma once

#include <memory>
#include <string>

#include "farmvoice/core/error.hpp"
#include "farmvoice/service/service.hpp"

namespace httplib {
class Server;
}

namespace fv::service {

/// HTTP status used for each error code in API responses.
int http_status(ErrorCode code) noexcept;

/// JSON API under /v1. Every route except GET /v1/health and
/// POST /v1/login requires "Authorization: Bearer <token>".
class HttpServer {
 public:
  explicit HttpServer(FeedbackService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port; throws
  /// Error{IoError} when the address cannot be bound.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  void listen();
  void stop();
  bool running() const;

 private:
  void mount();

  FeedbackService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace fv::service
