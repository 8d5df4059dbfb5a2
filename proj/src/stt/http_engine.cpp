#include "farmvoice/core/error.hpp"
#include "farmvoice/stt/engine.hpp"
#include "farmvoice/util/base64.hpp"

namespace fv::stt {

HttpEngine::EngineOutput HttpEngine::run(const FeedbackRecording& recording, Language language) {
  const nlohmann::json request = {
      {"recording_id", recording.id.str()},
      {"language", to_string(language)},
      {"media_type", recording.media_type},
      {"audio_base64", util::base64_encode(recording.audio)},
  };
  const nlohmann::json response = util::post_json(config_.endpoint, request);
  if (!response.is_object() || !response.contains("text") || !response["text"].is_string()) {
    throw Error(ErrorCode::EngineUnavailable, "transcription engine returned no text");
  }
  EngineOutput out;
  out.text = response["text"].get<std::string>();
  if (response.contains("engine_id") && response["engine_id"].is_string()) {
    out.engine_id = response["engine_id"].get<std::string>();
  }
  return out;
}

}  // namespace fv::stt
