#include "farmvoice/nlp/translation.hpp"

#include "farmvoice/core/error.hpp"

namespace fv::nlp {

std::string HttpTranslationEngine::translate(std::string_view text, Language from, Language to) {
  const nlohmann::json response = util::post_json(
      endpoint_, {{"text", text}, {"source_lang", to_string(from)}, {"target_lang", to_string(to)}});
  if (!response.is_object() || !response.contains("text") || !response["text"].is_string()) {
    throw Error(ErrorCode::EngineUnavailable, "translation engine returned no text");
  }
  return response["text"].get<std::string>();
}

TranslationResult Translator::translate(std::string_view text, Language from, Language to) {
  if (from == to) {
    throw Error(ErrorCode::InvalidArgument, "source and target language are both " +
                                                std::string(to_string(to)));
  }
  auto key = std::make_pair(std::string(text), to);
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    ++engine_calls_;
  }
  std::string raw = engine_->translate(text, from, to);
  TranslationResult result;
  result.target = to;
  result.translated = !raw.starts_with(kUntranslatedMarker);
  result.text = result.translated ? std::move(raw) : raw.substr(kUntranslatedMarker.size());

  std::lock_guard lock(mutex_);
  return cache_.emplace(std::move(key), std::move(result)).first->second;
}

std::size_t Translator::engine_calls() const {
  std::lock_guard lock(mutex_);
  return engine_calls_;
}

}  // namespace fv::nlp
