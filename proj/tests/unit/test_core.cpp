#include <doctest.h>

#include <random>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/core/embedded_data.hpp"
#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/nlp/resources.hpp"

using namespace fv;

namespace {

FeedbackRecording valid_recording() {
  FeedbackRecording r;
  r.id = RecordingId("rec-1");
  r.speaker = "anna";
  r.audio = {1, 2, 3};
  r.duration_seconds = 4.5;
  r.language = "en";
  return r;
}

}  // namespace

TEST_CASE("utf8 decoding and counting") {
  CHECK(utf8::is_valid("Grüße"));
  CHECK_FALSE(utf8::is_valid("\xC3"));
  CHECK_FALSE(utf8::is_valid("\xC0\xAF"));          // overlong slash
  CHECK_FALSE(utf8::is_valid("\xED\xA0\x80"));      // surrogate
  CHECK(utf8::count_scalars("ä") == 1);
  CHECK(utf8::count_scalars("👍") == 1);
  CHECK(utf8::decode("a\xFF" "b") == std::u32string{U'a', utf8::kReplacement, U'b'});
  CHECK(utf8::encode(utf8::decode("Düngung 👍")) == "Düngung 👍");
  CHECK(utf8::to_lower("ÄÖÜ Straße") == "äöü straße");
  CHECK(utf8::is_whitespace(U' '));
  CHECK(utf8::is_punctuation(U'“'));
  CHECK_FALSE(utf8::is_punctuation(U'ä'));
}

TEST_CASE("enumerations round-trip through their wire names") {
  for (auto r : {StakeholderRole::Farmer, StakeholderRole::SupportPersonnel, StakeholderRole::RequirementsEngineer}) {
    CHECK(parse_role(to_string(r)) == r);
  }
  for (auto l : {Language::En, Language::De}) CHECK(parse_language(to_string(l)) == l);
  for (auto m : {FeedbackMode::FreeForm, FeedbackMode::Baseline}) CHECK(parse_mode(to_string(m)) == m);
  for (auto c : {CaptureModule::SpeechToText, CaptureModule::AudioSentiment}) CHECK(parse_capture(to_string(c)) == c);
  for (auto s : {NoiseSetting::Office, NoiseSetting::Field}) CHECK(parse_setting(to_string(s)) == s);
  CHECK_FALSE(parse_language("fr"));
  CHECK_FALSE(parse_role("admin"));
}

TEST_CASE("timestamps are RFC 3339 UTC") {
  const auto t = parse_timestamp("2023-08-02T10:15:00Z");
  REQUIRE(t);
  CHECK(format_timestamp(*t) == "2023-08-02T10:15:00Z");
  CHECK_FALSE(parse_timestamp("2023-08-02 10:15:00"));
  CHECK_FALSE(parse_timestamp("2023-13-02T10:15:00Z"));
}

TEST_CASE("validate_recording") {
  CHECK_FALSE(validate_recording(valid_recording()));

  auto empty = valid_recording();
  empty.audio.clear();
  CHECK(validate_recording(empty) == RecordingError::EmptyAudio);

  auto french = valid_recording();
  french.language = "fr";
  CHECK(validate_recording(french) == RecordingError::UnsupportedLanguage);

  auto negative = valid_recording();
  negative.duration_seconds = -1.0;
  CHECK(validate_recording(negative) == RecordingError::NegativeDuration);

  auto german = valid_recording();
  german.language = "de";
  CHECK_FALSE(validate_recording(german));
  CHECK(german.language_tag() == Language::De);
}

TEST_CASE("BaselineText counts bytes and scalar values") {
  BaselineText ascii("the field is dry");
  CHECK(ascii.source_bytes() == 16);
  CHECK(ascii.source_characters() == 16);

  BaselineText umlaut("ä");
  CHECK(umlaut.source_bytes() == 2);
  CHECK(umlaut.source_characters() == 1);

  CHECK_THROWS_AS(BaselineText("\xC3"), Error);

  const BaselineText fixture(nlp::read_file(FV_FIXTURES "/evaluation/baseline.txt"));
  CHECK(fixture.source_bytes() == 1597);
  CHECK(fixture.source_characters() == 1572);
}

TEST_CASE("BaselineText property: bytes >= characters, equal iff single-byte") {
  std::mt19937_64 rng(7);
  const std::u32string alphabet = U"abc äöü€👍";
  for (int round = 0; round < 500; ++round) {
    std::u32string s;
    const auto len = rng() % 20;
    for (std::size_t i = 0; i < len; ++i) s.push_back(alphabet[rng() % alphabet.size()]);
    const BaselineText b(utf8::encode(s));
    const bool single_byte = std::all_of(s.begin(), s.end(), [](char32_t c) { return c < 0x80; });
    CHECK(b.source_bytes() >= b.source_characters());
    CHECK((b.source_bytes() == b.source_characters()) == single_byte);
    CHECK(b.source_characters() == s.size());
  }
}

TEST_CASE("error codes carry names") {
  const Error e(ErrorCode::SpecInfeasible, "nope");
  CHECK(e.code() == ErrorCode::SpecInfeasible);
  CHECK(to_string(e.code()) == "SpecInfeasible");
  CHECK(std::string(e.what()) == "nope");
}

TEST_CASE("embedded data files are compiled in") {
  CHECK_FALSE(data::embedded_file("stopwords/en.txt").empty());
  CHECK_FALSE(data::embedded_file("cues/system.txt").empty());
  CHECK(data::embedded_file("missing.txt").empty());
}
