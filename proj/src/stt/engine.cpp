#include "farmvoice/stt/engine.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "farmvoice/core/error.hpp"

namespace fv::stt {

std::uint64_t fnv1a(std::string_view text) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Transcript TranscriptionEngine::transcribe(const FeedbackRecording& recording) {
  if (auto problem = validate_recording(recording)) {
    const auto code = *problem == RecordingError::UnsupportedLanguage
                          ? ErrorCode::UnsupportedLanguage
                          : ErrorCode::ValidationError;
    throw Error(code, "cannot transcribe recording " + recording.id.str() + ": " +
                          std::string(to_string(*problem)));
  }
  const Language language = recording.language_tag();
  if (!languages().contains(language)) {
    throw Error(ErrorCode::UnsupportedLanguage,
                engine_id() + " does not support language " + std::string(to_string(language)));
  }
  EngineOutput out = run(recording, language);
  Transcript t;
  t.recording_id = recording.id;
  t.text = std::move(out.text);
  t.language = language;
  t.engine_id = out.engine_id.empty() ? engine_id() : std::move(out.engine_id);
  t.edited = false;
  return t;
}

SidecarLookup sidecar_directory(std::filesystem::path dir) {
  return [dir = std::move(dir)](const FeedbackRecording& rec) -> std::optional<std::string> {
    std::ifstream in(dir / (rec.id.str() + ".txt"), std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
}

SidecarLookup sidecar_map(std::map<std::string, std::string> texts) {
  return [texts = std::move(texts)](const FeedbackRecording& rec) -> std::optional<std::string> {
    auto it = texts.find(rec.id.str());
    if (it == texts.end()) return std::nullopt;
    return it->second;
  };
}

MockEngine::MockEngine(std::uint64_t seed, SidecarLookup sidecar, std::set<Language> languages)
    : seed_(seed), sidecar_(std::move(sidecar)), languages_(std::move(languages)) {}

MockEngine::EngineOutput MockEngine::run(const FeedbackRecording& recording, Language language) {
  if (sidecar_) {
    if (auto text = sidecar_(recording)) return {std::move(*text), engine_id()};
  }
  static constexpr const char* kEnglish[] = {
      "the", "field", "tractor", "map", "is", "slow", "sensor", "crop", "app", "works",
      "today", "offline", "data", "rain", "yield", "soil", "good", "update", "guidance", "we"};
  static constexpr const char* kGerman[] = {
      "das", "feld", "traktor", "karte", "ist", "langsam", "sensor", "ernte", "app", "läuft",
      "heute", "offline", "daten", "regen", "ertrag", "boden", "gut", "update", "spur", "wir"};
  const auto& words = language == Language::De ? kGerman : kEnglish;

  std::mt19937_64 rng(fnv1a(recording.id.str()) ^ seed_);
  const std::size_t count = 5 + rng() % 8;
  std::string text;
  for (std::size_t i = 0; i < count; ++i) {
    if (i) text += ' ';
    text += words[rng() % std::size(words)];
  }
  return {text, engine_id()};
}

}  // namespace fv::stt
