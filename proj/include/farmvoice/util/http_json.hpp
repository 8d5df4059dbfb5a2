#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

namespace fv::util {

struct EndpointConfig {
  std::string base_url;  // scheme://host:port
  std::string path = "/";
  std::chrono::milliseconds timeout{5000};
  int retries = 2;  // additional attempts after the first
  std::chrono::milliseconds retry_backoff{100};
};

/// POSTs a JSON body and returns the parsed JSON response. Connection
/// failures, timeouts, 5xx statuses and unparsable bodies are retried and
/// finally reported as Error{EngineUnavailable}.
nlohmann::json post_json(const EndpointConfig& endpoint, const nlohmann::json& body);

}  // namespace fv::util
