#include "farmvoice/nlp/analysis.hpp"

#include "farmvoice/core/error.hpp"

namespace fv::nlp {

std::string_view to_string(FieldStatus s) noexcept {
  switch (s) {
    case FieldStatus::Complete: return "complete";
    case FieldStatus::Pending: return "pending";
    case FieldStatus::Absent: return "absent";
  }
  return "";
}

AnalysisResult analyze(const Transcript* transcript, const FeedbackRecording* recording,
                       const AnalysisConfig& config, const AnalysisDeps& deps) {
  AnalysisResult r;
  if (transcript) r.recording_id = transcript->recording_id;
  if (recording) r.recording_id = recording->id;
  const Resources& resources = deps.resources ? *deps.resources : Resources::builtin();

  if (transcript) {
    const Language lang = transcript->language;
    r.keywords = decltype(r.keywords)::complete(
        extract_keywords(transcript->text, lang, config.keyword_count, resources));
    r.summary = decltype(r.summary)::complete(
        transcript->text.empty() ? std::string()
                                 : summarize(transcript->text, config.summary_sentences, lang, resources));
    r.text_sentiment = decltype(r.text_sentiment)::complete(
        text_sentiment(transcript->text, lang, resources, config.sentiment_threshold));

    if (deps.translator && config.translate_to && *config.translate_to != lang) {
      try {
        r.translation = decltype(r.translation)::complete(
            deps.translator->translate(transcript->text, lang, *config.translate_to));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::EngineUnavailable) throw;
        r.translation = decltype(r.translation)::pending(e.what());
      }
    }
  }

  if (recording && deps.emotion && recording->capture == CaptureModule::AudioSentiment &&
      !recording->audio.empty()) {
    try {
      r.audio_emotion = decltype(r.audio_emotion)::complete(deps.emotion->classify(*recording));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::EngineUnavailable) throw;
      r.audio_emotion = decltype(r.audio_emotion)::pending(e.what());
    }
  }
  return r;
}

namespace {

template <typename T, typename Fn>
nlohmann::json field_json(const AnalysisField<T>& f, Fn&& value_json) {
  nlohmann::json j = {{"status", to_string(f.status)}};
  j["value"] = f.value ? value_json(*f.value) : nlohmann::json(nullptr);
  if (!f.detail.empty()) j["detail"] = f.detail;
  return j;
}

}  // namespace

nlohmann::json to_json(const AnalysisResult& r) {
  nlohmann::json j;
  j["recording_id"] = r.recording_id.str();
  j["keywords"] = field_json(r.keywords, [](const auto& v) { return nlohmann::json(v); });
  j["summary"] = field_json(r.summary, [](const auto& v) { return nlohmann::json(v); });
  j["text_sentiment"] = field_json(r.text_sentiment, [](const Sentiment& s) {
    return nlohmann::json{{"label", to_string(s.label)}, {"score", s.score}, {"matched_terms", s.matched_terms}};
  });
  j["audio_emotion"] = field_json(r.audio_emotion, [](const EmotionResult& e) {
    return nlohmann::json{{"emotion", to_string(e.emotion)}, {"confidence", e.confidence}, {"engine_id", e.engine_id}};
  });
  j["translation"] = field_json(r.translation, [](const TranslationResult& t) {
    return nlohmann::json{{"text", t.text}, {"target", to_string(t.target)}, {"translated", t.translated}};
  });
  return j;
}

}  // namespace fv::nlp
