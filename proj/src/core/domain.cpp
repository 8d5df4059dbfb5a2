#include "farmvoice/core/domain.hpp"

#include <cstdio>
#include <ctime>

#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"

namespace fv {

std::string_view to_string(StakeholderRole role) noexcept {
  switch (role) {
    case StakeholderRole::Farmer: return "farmer";
    case StakeholderRole::SupportPersonnel: return "support";
    case StakeholderRole::RequirementsEngineer: return "requirements_engineer";
  }
  return "";
}

std::string_view to_string(Language language) noexcept {
  return language == Language::De ? "de" : "en";
}

std::string_view to_string(FeedbackMode mode) noexcept {
  return mode == FeedbackMode::Baseline ? "baseline" : "free_form";
}

std::string_view to_string(CaptureModule module) noexcept {
  return module == CaptureModule::AudioSentiment ? "asa" : "s2t";
}

std::string_view to_string(NoiseSetting setting) noexcept {
  return setting == NoiseSetting::Field ? "field" : "office";
}

std::optional<StakeholderRole> parse_role(std::string_view text) noexcept {
  if (text == "farmer") return StakeholderRole::Farmer;
  if (text == "support") return StakeholderRole::SupportPersonnel;
  if (text == "requirements_engineer") return StakeholderRole::RequirementsEngineer;
  return std::nullopt;
}

std::optional<Language> parse_language(std::string_view code) noexcept {
  if (code == "en") return Language::En;
  if (code == "de") return Language::De;
  return std::nullopt;
}

std::optional<FeedbackMode> parse_mode(std::string_view text) noexcept {
  if (text == "free_form") return FeedbackMode::FreeForm;
  if (text == "baseline") return FeedbackMode::Baseline;
  return std::nullopt;
}

std::optional<CaptureModule> parse_capture(std::string_view text) noexcept {
  if (text == "s2t") return CaptureModule::SpeechToText;
  if (text == "asa") return CaptureModule::AudioSentiment;
  return std::nullopt;
}

std::optional<NoiseSetting> parse_setting(std::string_view text) noexcept {
  if (text == "office") return NoiseSetting::Office;
  if (text == "field") return NoiseSetting::Field;
  return std::nullopt;
}

std::string format_timestamp(Timestamp t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text) {
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0, consumed = 0;
  const std::string s(text);
  if (std::sscanf(s.c_str(), "%4d-%2d-%2dT%2d:%2d:%2dZ%n", &y, &mo, &d, &h, &mi, &sec, &consumed) != 6 ||
      static_cast<std::size_t>(consumed) != s.size() || s.size() != 20) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || sec > 59 || h < 0 || mi < 0 || sec < 0) return std::nullopt;
  return Timestamp(sys_days(date) + hours(h) + minutes(mi) + seconds(sec));
}

Language FeedbackRecording::language_tag() const {
  auto tag = parse_language(language);
  if (!tag) throw Error(ErrorCode::UnsupportedLanguage, "unsupported language: " + language);
  return *tag;
}

std::string_view to_string(RecordingError error) noexcept {
  switch (error) {
    case RecordingError::EmptyAudio: return "EmptyAudio";
    case RecordingError::UnsupportedLanguage: return "UnsupportedLanguage";
    case RecordingError::NegativeDuration: return "NegativeDuration";
  }
  return "";
}

std::optional<RecordingError> validate_recording(const FeedbackRecording& rec) {
  if (rec.audio.empty()) return RecordingError::EmptyAudio;
  if (!parse_language(rec.language)) return RecordingError::UnsupportedLanguage;
  if (!(rec.duration_seconds >= 0.0)) return RecordingError::NegativeDuration;
  return std::nullopt;
}

BaselineText::BaselineText(std::string text) : text_(std::move(text)) {
  if (!utf8::is_valid(text_)) {
    throw Error(ErrorCode::InvalidArgument, "baseline text is not valid UTF-8");
  }
  source_bytes_ = text_.size();
  source_characters_ = utf8::count_scalars(text_);
}

}  // namespace fv
