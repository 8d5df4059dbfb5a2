#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/util/http_json.hpp"

namespace fv::stt {

/// A speech-to-text backend. transcribe() validates the recording and the
/// language capability before delegating to the engine.
class TranscriptionEngine {
 public:
  virtual ~TranscriptionEngine() = default;

  virtual std::string engine_id() const = 0;
  virtual std::set<Language> languages() const = 0;

  /// Throws Error{UnsupportedLanguage}, Error{ValidationError} for an
  /// invalid recording, or Error{EngineUnavailable}.
  Transcript transcribe(const FeedbackRecording& recording);

 protected:
  struct EngineOutput {
    std::string text;
    std::string engine_id;
  };
  virtual EngineOutput run(const FeedbackRecording& recording, Language language) = 0;
};

/// Looks up the known spoken text of a recording, if any.
using SidecarLookup = std::function<std::optional<std::string>(const FeedbackRecording&)>;

SidecarLookup sidecar_directory(std::filesystem::path dir);  // reads <dir>/<id>.txt
SidecarLookup sidecar_map(std::map<std::string, std::string> texts);

/// Deterministic engine for tests and offline runs: echoes the sidecar text
/// when one exists, otherwise produces pseudo-text seeded by (id, seed).
class MockEngine final : public TranscriptionEngine {
 public:
  explicit MockEngine(std::uint64_t seed, SidecarLookup sidecar = {},
                      std::set<Language> languages = {Language::En, Language::De});

  std::string engine_id() const override { return "mock-v1"; }
  std::set<Language> languages() const override { return languages_; }

 protected:
  EngineOutput run(const FeedbackRecording& recording, Language language) override;

 private:
  std::uint64_t seed_;
  SidecarLookup sidecar_;
  std::set<Language> languages_;
};

struct HttpEngineConfig {
  util::EndpointConfig endpoint;
  std::set<Language> languages = {Language::En, Language::De};
  std::string engine_id = "http";
};

/// Bridges any external recognizer speaking the JSON protocol:
///   request  {"recording_id", "language", "media_type", "audio_base64"}
///   response {"text", "engine_id"}
class HttpEngine final : public TranscriptionEngine {
 public:
  explicit HttpEngine(HttpEngineConfig config) : config_(std::move(config)) {}

  std::string engine_id() const override { return config_.engine_id; }
  std::set<Language> languages() const override { return config_.languages; }

 protected:
  EngineOutput run(const FeedbackRecording& recording, Language language) override;

 private:
  HttpEngineConfig config_;
};

std::uint64_t fnv1a(std::string_view text) noexcept;

}  // namespace fv::stt
