#include "farmvoice/nlp/emotion.hpp"

#include <algorithm>

#include "farmvoice/core/error.hpp"
#include "farmvoice/nlp/audio.hpp"
#include "farmvoice/util/base64.hpp"

namespace fv::nlp {

std::string_view to_string(Emotion e) noexcept {
  switch (e) {
    case Emotion::Neutral: return "neutral";
    case Emotion::Happy: return "happy";
    case Emotion::Sad: return "sad";
    case Emotion::Angry: return "angry";
  }
  return "";
}

std::optional<Emotion> parse_emotion(std::string_view text) noexcept {
  for (Emotion e : {Emotion::Neutral, Emotion::Happy, Emotion::Sad, Emotion::Angry}) {
    if (to_string(e) == text) return e;
  }
  return std::nullopt;
}

EmotionResult LoudnessEmotionEngine::classify(const FeedbackRecording& recording) {
  EmotionResult result{Emotion::Neutral, 0.5, engine_id()};
  if (detect_container(recording.audio) != AudioContainer::Wav) return result;
  const double rms = wav_loudness(recording.audio).rms;
  if (rms > threshold_) {
    result.emotion = Emotion::Angry;
    const double headroom = threshold_ < 1.0 ? (rms - threshold_) / (1.0 - threshold_) : 1.0;
    result.confidence = std::clamp(0.5 + 0.5 * headroom, 0.0, 1.0);
  }
  return result;
}

EmotionResult HttpEmotionEngine::classify(const FeedbackRecording& recording) {
  const nlohmann::json response =
      util::post_json(endpoint_, {{"recording_id", recording.id.str()},
                                  {"media_type", recording.media_type},
                                  {"audio_base64", util::base64_encode(recording.audio)}});
  std::optional<Emotion> emotion;
  if (response.is_object() && response.contains("emotion") && response["emotion"].is_string()) {
    emotion = parse_emotion(response["emotion"].get<std::string>());
  }
  if (!emotion || !response.contains("confidence") || !response["confidence"].is_number()) {
    throw Error(ErrorCode::EngineUnavailable, "emotion engine returned an unusable response");
  }
  EmotionResult out;
  out.emotion = *emotion;
  out.confidence = std::clamp(response["confidence"].get<double>(), 0.0, 1.0);
  out.engine_id = response.value("engine_id", engine_id());
  return out;
}

}  // namespace fv::nlp
