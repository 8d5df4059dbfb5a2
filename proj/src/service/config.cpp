#include "farmvoice/service/config.hpp"

#include <cstdlib>
#include <fstream>

#include "farmvoice/core/error.hpp"
#include "farmvoice/nlp/resources.hpp"

namespace fv::service {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, "config: " + what); }

// "http://host:port/path" -> base "http://host:port", path "/path".
void set_url(util::EndpointConfig& endpoint, const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) bad("endpoint URL needs a scheme: " + url);
  const auto slash = url.find('/', scheme + 3);
  endpoint.base_url = url.substr(0, slash);
  endpoint.path = slash == std::string::npos ? "/" : url.substr(slash);
}

void read_endpoint(const json& j, util::EndpointConfig& endpoint) {
  if (j.contains("url")) set_url(endpoint, j.at("url").get<std::string>());
  if (j.contains("timeout_ms")) endpoint.timeout = std::chrono::milliseconds(j.at("timeout_ms").get<long>());
  if (j.contains("retries")) endpoint.retries = j.at("retries").get<int>();
  if (j.contains("retry_backoff_ms")) {
    endpoint.retry_backoff = std::chrono::milliseconds(j.at("retry_backoff_ms").get<long>());
  }
}

std::optional<std::chrono::seconds> read_days(const json& j, const char* key,
                                              std::optional<std::chrono::seconds> fallback) {
  if (!j.contains(key)) return fallback;
  if (j.at(key).is_null()) return std::nullopt;
  const double days = j.at(key).get<double>();
  if (days < 0) bad(std::string("negative retention for ") + key);
  return std::chrono::seconds(static_cast<long long>(days * 86400.0));
}

}  // namespace

ServiceConfig config_from_json(const json& doc, const std::filesystem::path& base_dir) {
  ServiceConfig c;
  try {
    c.host = doc.value("host", c.host);
    c.port = doc.value("port", c.port);
    if (doc.contains("store_path")) {
      const auto p = doc.at("store_path").get<std::string>();
      c.store_path = p == ":memory:" || std::filesystem::path(p).is_absolute() ? p : (base_dir / p).string();
    }
    c.max_audio_bytes = doc.value("max_audio_bytes", c.max_audio_bytes);
    if (doc.contains("session_ttl_minutes")) {
      c.session_ttl = std::chrono::minutes(doc.at("session_ttl_minutes").get<long>());
    }
    c.password_iterations = doc.value("password_iterations", c.password_iterations);
    c.workers = doc.value("workers", c.workers);
    if (doc.contains("job_retry_backoff_ms")) {
      c.retry_backoff = std::chrono::milliseconds(doc.at("job_retry_backoff_ms").get<long>());
    }
    if (doc.contains("baseline_path")) {
      std::filesystem::path p = doc.at("baseline_path").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      c.baseline_text = nlp::read_file(p);
    } else if (doc.contains("baseline_text")) {
      c.baseline_text = doc.at("baseline_text").get<std::string>();
    }
    if (doc.contains("normalization")) {
      const auto& n = doc.at("normalization");
      c.normalization.fold_case = n.value("fold_case", true);
      c.normalization.strip_punctuation = n.value("strip_punctuation", true);
    }
    if (doc.contains("retention")) {
      const auto& r = doc.at("retention");
      c.retention.audio = read_days(r, "audio_days", c.retention.audio);
      c.retention.transcript = read_days(r, "transcript_days", c.retention.transcript);
      c.retention.analysis = read_days(r, "analysis_days", c.retention.analysis);
      c.retention.report = read_days(r, "report_days", c.retention.report);
    }
    if (doc.contains("stt")) {
      const auto& s = doc.at("stt");
      c.stt.kind = s.value("kind", c.stt.kind);
      c.stt.seed = s.value("seed", c.stt.seed);
      if (s.contains("sidecar_dir")) {
        std::filesystem::path p = s.at("sidecar_dir").get<std::string>();
        c.stt.sidecar_dir = (p.is_relative() ? base_dir / p : p).string();
      }
      read_endpoint(s, c.stt.endpoint);
      if (c.stt.kind != "mock" && c.stt.kind != "http") bad("stt.kind must be mock or http");
    }
    if (doc.contains("emotion")) {
      const auto& e = doc.at("emotion");
      c.emotion.kind = e.value("kind", c.emotion.kind);
      c.emotion.rms_threshold = e.value("rms_threshold", c.emotion.rms_threshold);
      read_endpoint(e, c.emotion.endpoint);
      if (c.emotion.kind != "builtin" && c.emotion.kind != "http") bad("emotion.kind must be builtin or http");
    }
    if (doc.contains("translation")) {
      const auto& t = doc.at("translation");
      c.translation.kind = t.value("kind", c.translation.kind);
      if (t.contains("target")) {
        auto lang = parse_language(t.at("target").get<std::string>());
        if (!lang) bad("unsupported translation target");
        c.translation.target = lang;
      }
      read_endpoint(t, c.translation.endpoint);
      if (c.translation.kind != "stub" && c.translation.kind != "http") bad("translation.kind must be stub or http");
    }
    for (const auto& a : doc.value("accounts", json::array())) {
      AccountSeed seed;
      seed.name = a.at("name").get<std::string>();
      seed.password = a.value("password", "");
      seed.password_hash = a.value("password_hash", "");
      auto role = parse_role(a.value("role", "farmer"));
      if (!role) bad("unknown role for account " + seed.name);
      seed.role = *role;
      auto lang = parse_language(a.value("language", "en"));
      if (!lang) bad("unsupported language for account " + seed.name);
      seed.language = *lang;
      seed.admin = a.value("admin", false);
      if (seed.password.empty() && seed.password_hash.empty()) bad("account " + seed.name + " has no credential");
      c.accounts.push_back(std::move(seed));
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  return c;
}

ServiceConfig load_config(const std::filesystem::path& path) {
  const std::string text = nlp::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  ServiceConfig c = config_from_json(doc, path.parent_path());
  apply_env_overrides(c, process_env);
  return c;
}

void apply_env_overrides(ServiceConfig& c, const EnvLookup& env) {
  auto number = [&](const std::string& name, const std::string& v) {
    try {
      std::size_t used = 0;
      const long long n = std::stoll(v, &used);
      if (used != v.size() || n < 0) throw std::invalid_argument(v);
      return n;
    } catch (const std::exception&) {
      bad(name + " must be a non-negative integer");
    }
  };
  if (auto v = env("FARMVOICE_HOST")) c.host = *v;
  if (auto v = env("FARMVOICE_PORT")) c.port = static_cast<int>(number("FARMVOICE_PORT", *v));
  if (auto v = env("FARMVOICE_STORE")) c.store_path = *v;
  if (auto v = env("FARMVOICE_WORKERS")) c.workers = static_cast<std::size_t>(number("FARMVOICE_WORKERS", *v));
  if (auto v = env("FARMVOICE_STT_URL")) {
    c.stt.kind = "http";
    set_url(c.stt.endpoint, *v);
  }
  if (auto v = env("FARMVOICE_EMOTION_URL")) {
    c.emotion.kind = "http";
    set_url(c.emotion.endpoint, *v);
  }
  if (auto v = env("FARMVOICE_TRANSLATION_URL")) {
    c.translation.kind = "http";
    set_url(c.translation.endpoint, *v);
  }
  if (auto v = env("FARMVOICE_AUDIO_RETENTION_DAYS")) {
    c.retention.audio = std::chrono::seconds(number("FARMVOICE_AUDIO_RETENTION_DAYS", *v) * 86400);
  }
}

std::optional<std::string> process_env(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (!v) return std::nullopt;
  return std::string(v);
}

}  // namespace fv::service
