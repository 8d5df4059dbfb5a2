#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/util/http_json.hpp"

namespace fv::nlp {

enum class Emotion { Neutral, Happy, Sad, Angry };

std::string_view to_string(Emotion e) noexcept;
std::optional<Emotion> parse_emotion(std::string_view text) noexcept;

struct EmotionResult {
  Emotion emotion = Emotion::Neutral;
  double confidence = 0.5;  // in [0, 1]
  std::string engine_id;
};

class EmotionEngine {
 public:
  virtual ~EmotionEngine() = default;
  virtual std::string engine_id() const = 0;
  /// Throws Error{EngineUnavailable} when the backend cannot be reached.
  virtual EmotionResult classify(const FeedbackRecording& recording) = 0;
};

/// Built-in stand-in: Neutral at confidence 0.5 unless the WAV signal's
/// RMS exceeds the threshold, which reads as Angry. Containers other than
/// WAV are not decoded and stay Neutral.
class LoudnessEmotionEngine final : public EmotionEngine {
 public:
  explicit LoudnessEmotionEngine(double rms_threshold = 0.5) : threshold_(rms_threshold) {}

  std::string engine_id() const override { return "loudness-v1"; }
  EmotionResult classify(const FeedbackRecording& recording) override;

 private:
  double threshold_;
};

/// request {"recording_id", "media_type", "audio_base64"};
/// response {"emotion", "confidence", "engine_id"}.
class HttpEmotionEngine final : public EmotionEngine {
 public:
  explicit HttpEmotionEngine(util::EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}

  std::string engine_id() const override { return "http-emotion"; }
  EmotionResult classify(const FeedbackRecording& recording) override;

 private:
  util::EndpointConfig endpoint_;
};

inline EmotionResult audio_emotion(const FeedbackRecording& recording, EmotionEngine& engine) {
  return engine.classify(recording);
}

}  // namespace fv::nlp
