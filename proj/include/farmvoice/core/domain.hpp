#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fv {

enum class StakeholderRole { Farmer, SupportPersonnel, RequirementsEngineer };
enum class Language { En, De };
enum class FeedbackMode { FreeForm, Baseline };
enum class CaptureModule { SpeechToText, AudioSentiment };
enum class NoiseSetting { Office, Field };

std::string_view to_string(StakeholderRole role) noexcept;
std::string_view to_string(Language language) noexcept;
std::string_view to_string(FeedbackMode mode) noexcept;
std::string_view to_string(CaptureModule module) noexcept;
std::string_view to_string(NoiseSetting setting) noexcept;

std::optional<StakeholderRole> parse_role(std::string_view text) noexcept;
std::optional<Language> parse_language(std::string_view code) noexcept;
std::optional<FeedbackMode> parse_mode(std::string_view text) noexcept;
std::optional<CaptureModule> parse_capture(std::string_view text) noexcept;
std::optional<NoiseSetting> parse_setting(std::string_view text) noexcept;

using Timestamp = std::chrono::system_clock::time_point;

/// RFC 3339 UTC with second precision, e.g. 2023-08-02T10:15:00Z.
std::string format_timestamp(Timestamp t);
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Client-generated identifier of a recording; makes re-uploads idempotent.
class RecordingId {
 public:
  RecordingId() = default;
  explicit RecordingId(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend auto operator<=>(const RecordingId&, const RecordingId&) = default;

 private:
  std::string value_;
};

struct FeedbackRecording {
  RecordingId id;
  std::string speaker;
  std::vector<std::uint8_t> audio;
  std::string media_type = "audio/wav";
  double duration_seconds = 0.0;
  // Kept as the raw code so that unsupported tags can be reported.
  std::string language = "en";
  FeedbackMode mode = FeedbackMode::FreeForm;
  CaptureModule capture = CaptureModule::SpeechToText;
  std::optional<NoiseSetting> setting;
  Timestamp created_at{};

  /// Only meaningful after validate_recording() accepted the recording.
  Language language_tag() const;
};

enum class RecordingError { EmptyAudio, UnsupportedLanguage, NegativeDuration };

std::string_view to_string(RecordingError error) noexcept;

/// Checks the recording invariants; returns the first violation found.
std::optional<RecordingError> validate_recording(const FeedbackRecording& rec);

struct Transcript {
  RecordingId recording_id;
  std::string text;
  Language language = Language::En;
  std::string engine_id;
  bool edited = false;
};

/// The fixed read-aloud text of baseline mode together with its sizes.
class BaselineText {
 public:
  explicit BaselineText(std::string text);

  const std::string& text() const noexcept { return text_; }
  std::size_t source_bytes() const noexcept { return source_bytes_; }
  std::size_t source_characters() const noexcept { return source_characters_; }

 private:
  std::string text_;
  std::size_t source_bytes_;
  std::size_t source_characters_;
};

}  // namespace fv
