#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/nlp/emotion.hpp"
#include "farmvoice/nlp/resources.hpp"
#include "farmvoice/nlp/text_analysis.hpp"
#include "farmvoice/nlp/translation.hpp"

namespace fv::nlp {

enum class FieldStatus { Complete, Pending, Absent };

std::string_view to_string(FieldStatus s) noexcept;

template <typename T>
struct AnalysisField {
  FieldStatus status = FieldStatus::Absent;
  std::optional<T> value;
  std::string detail;  // why a field is pending

  static AnalysisField complete(T v) { return {FieldStatus::Complete, std::move(v), {}}; }
  static AnalysisField pending(std::string why) { return {FieldStatus::Pending, std::nullopt, std::move(why)}; }
};

struct AnalysisResult {
  RecordingId recording_id;
  AnalysisField<std::vector<std::string>> keywords;
  AnalysisField<std::string> summary;
  AnalysisField<Sentiment> text_sentiment;
  AnalysisField<EmotionResult> audio_emotion;
  AnalysisField<TranslationResult> translation;
};

struct AnalysisConfig {
  std::size_t keyword_count = 5;
  std::size_t summary_sentences = 2;
  double sentiment_threshold = kSentimentThreshold;
  std::optional<Language> translate_to;
};

struct AnalysisDeps {
  const Resources* resources = &Resources::builtin();
  EmotionEngine* emotion = nullptr;  // emotion skipped when null
  Translator* translator = nullptr;  // translation skipped when null
};

/// Text fields come from the transcript, emotion from the audio of
/// recordings captured under the audio sentiment module. A field whose
/// engine is unreachable is marked pending instead of failing the whole
/// analysis.
AnalysisResult analyze(const Transcript* transcript, const FeedbackRecording* recording,
                       const AnalysisConfig& config, const AnalysisDeps& deps);

nlohmann::json to_json(const AnalysisResult& result);

}  // namespace fv::nlp
