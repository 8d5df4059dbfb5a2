#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/util/http_json.hpp"

namespace fv::nlp {

class TranslationEngine {
 public:
  virtual ~TranslationEngine() = default;
  virtual std::string engine_id() const = 0;
  virtual std::string translate(std::string_view text, Language from, Language to) = 0;
};

/// Prefix the stub engine puts in front of text it passes through.
inline constexpr std::string_view kUntranslatedMarker = "[untranslated] ";

class StubTranslationEngine final : public TranslationEngine {
 public:
  std::string engine_id() const override { return "stub-translation"; }
  std::string translate(std::string_view text, Language, Language) override {
    return std::string(kUntranslatedMarker) + std::string(text);
  }
};

/// request {"text", "source_lang", "target_lang"}; response {"text"}.
class HttpTranslationEngine final : public TranslationEngine {
 public:
  explicit HttpTranslationEngine(util::EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}
  std::string engine_id() const override { return "http-translation"; }
  std::string translate(std::string_view text, Language from, Language to) override;

 private:
  util::EndpointConfig endpoint_;
};

struct TranslationResult {
  std::string text;
  Language target = Language::En;
  bool translated = false;
};

/// Caches results per (text, target language); thread-safe.
class Translator {
 public:
  explicit Translator(std::shared_ptr<TranslationEngine> engine) : engine_(std::move(engine)) {}

  /// Throws Error{InvalidArgument} when from == to and
  /// Error{EngineUnavailable} from the engine (failures are not cached).
  TranslationResult translate(std::string_view text, Language from, Language to);

  std::size_t engine_calls() const;

 private:
  std::shared_ptr<TranslationEngine> engine_;
  mutable std::mutex mutex_;
  std::map<std::pair<std::string, Language>, TranslationResult> cache_;
  std::size_t engine_calls_ = 0;
};

}  // namespace fv::nlp
