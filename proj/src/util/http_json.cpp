#include "farmvoice/util/http_json.hpp"

#include <thread>

#include <httplib.h>

#include "farmvoice/core/error.hpp"

namespace fv::util {

nlohmann::json post_json(const EndpointConfig& endpoint, const nlohmann::json& body) {
  httplib::Client client(endpoint.base_url);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto usecs =
      std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const std::string payload = body.dump();
  std::string last_failure = "no attempt made";
  for (int attempt = 0; attempt <= endpoint.retries; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(endpoint.retry_backoff * attempt);
    auto res = client.Post(endpoint.path, payload, "application/json");
    if (!res) {
      last_failure = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_failure = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      // 4xx is a definite answer from the engine; retrying will not help.
      throw Error(ErrorCode::EngineUnavailable,
                  endpoint.base_url + endpoint.path + " rejected request: HTTP " +
                      std::to_string(res->status));
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception&) {
      last_failure = "unparsable response body";
    }
  }
  throw Error(ErrorCode::EngineUnavailable,
              endpoint.base_url + endpoint.path + " unavailable: " + last_failure);
}

}  // namespace fv::util
