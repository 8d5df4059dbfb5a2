#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/metrics/text.hpp"
#include "farmvoice/util/http_json.hpp"

namespace fv::service {

struct AccountSeed {
  std::string name;
  std::string password;       // hashed on load; never persisted
  std::string password_hash;  // alternative to `password`
  StakeholderRole role = StakeholderRole::Farmer;
  Language language = Language::En;
  bool admin = false;
};

/// Maximum age per artifact kind; nullopt keeps the artifact indefinitely.
/// Users can always delete their own data regardless of these values.
struct RetentionPolicy {
  std::optional<std::chrono::seconds> audio = std::chrono::hours(24 * 90);
  std::optional<std::chrono::seconds> transcript;
  std::optional<std::chrono::seconds> analysis;
  std::optional<std::chrono::seconds> report;
};

struct SttSettings {
  std::string kind = "mock";  // mock | http
  std::uint64_t seed = 0;
  std::string sidecar_dir;  // mock: <dir>/<id>.txt
  util::EndpointConfig endpoint;
};

struct EmotionSettings {
  std::string kind = "builtin";  // builtin | http
  double rms_threshold = 0.5;
  util::EndpointConfig endpoint;
};

struct TranslationSettings {
  std::string kind = "stub";  // stub | http
  std::optional<Language> target;
  util::EndpointConfig endpoint;
};

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store_path = "farmvoice.db";  // ":memory:" for an ephemeral store
  std::size_t max_audio_bytes = 25u * 1024u * 1024u;
  std::chrono::seconds session_ttl = std::chrono::hours(12);
  int password_iterations = 100000;
  std::size_t workers = 2;
  std::chrono::milliseconds retry_backoff{2000};
  std::optional<std::string> baseline_text;
  metrics::NormalizationPolicy normalization;
  RetentionPolicy retention;
  SttSettings stt;
  EmotionSettings emotion;
  TranslationSettings translation;
  std::vector<AccountSeed> accounts;
};

/// Relative paths inside the document resolve against `base_dir`.
/// Throws Error{ParseError} on unknown enum values or wrong types.
ServiceConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir);

/// Reads the JSON file and applies environment overrides.
ServiceConfig load_config(const std::filesystem::path& path);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// FARMVOICE_HOST, FARMVOICE_PORT, FARMVOICE_STORE, FARMVOICE_STT_URL,
/// FARMVOICE_EMOTION_URL, FARMVOICE_TRANSLATION_URL,
/// FARMVOICE_AUDIO_RETENTION_DAYS, FARMVOICE_WORKERS.
void apply_env_overrides(ServiceConfig& config, const EnvLookup& env);
std::optional<std::string> process_env(const std::string& name);

}  // namespace fv::service
