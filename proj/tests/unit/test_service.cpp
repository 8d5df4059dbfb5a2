#include <doctest.h>

#include <unistd.h>

#include <filesystem>
#include <thread>

#include "../support/service_fixture.hpp"
#include "farmvoice/core/error.hpp"
#include "farmvoice/service/auth.hpp"
#include "farmvoice/stt/engine.hpp"

using namespace fv;
using namespace fv::service;
using fixture::kPassword;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;  // stands for "nothing thrown"; no test expects IoError
}

struct World {
  explicit World(ServiceConfig cfg = fixture::service_config(), Engines engines = {},
                 fixture::ManualClock clk = {})
      : clock(clk), svc(std::move(cfg), std::move(engines), clock.clock()) {
    anna = svc.login("anna", kPassword).account;
    ben = svc.login("ben", kPassword).account;
    sam = svc.login("sam", kPassword).account;
    rita = svc.login("rita", kPassword).account;
    root = svc.login("root", kPassword).account;
  }
  fixture::ManualClock clock;
  FeedbackService svc;
  AccountRow anna, ben, sam, rita, root;
};

class DownEngine final : public stt::TranscriptionEngine {
 public:
  std::string engine_id() const override { return "down"; }
  std::set<Language> languages() const override { return {Language::En, Language::De}; }

 protected:
  EngineOutput run(const FeedbackRecording&, Language) override {
    throw Error(ErrorCode::EngineUnavailable, "engine offline");
  }
};

std::filesystem::path temp_store(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / ("fv-test-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  auto p = dir / name;
  for (const char* suffix : {"", "-wal", "-shm"}) std::filesystem::remove(p.string() + suffix);
  return p;
}

void upload_study(World& w) {
  for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
    for (auto s : {NoiseSetting::Office, NoiseSetting::Field}) {
      w.svc.upload_recording(w.anna, fixture::baseline_upload(p, s));
    }
  }
}

}  // namespace

TEST_CASE("login and sessions") {
  fixture::ManualClock clock;
  auto cfg = fixture::service_config();
  cfg.session_ttl = std::chrono::minutes(30);
  FeedbackService svc(cfg, {}, clock.clock());

  const auto s = svc.login("anna", kPassword);
  CHECK(s.account.role == StakeholderRole::Farmer);
  CHECK(s.token.size() == 64);  // 256 random bits, hex encoded
  CHECK(svc.login("anna", kPassword).token != s.token);
  CHECK(svc.authenticate(s.token).name == "anna");
  CHECK(code_of([&] { svc.login("anna", "wrong"); }) == ErrorCode::InvalidCredentials);
  CHECK(code_of([&] { svc.login("nobody", kPassword); }) == ErrorCode::InvalidCredentials);
  CHECK(code_of([&] { svc.authenticate("deadbeef"); }) == ErrorCode::Unauthorized);

  const auto stored = svc.store().account_by_name("anna");
  REQUIRE(stored);
  CHECK(stored->credential.starts_with("pbkdf2-sha256$"));
  CHECK(stored->credential.find(kPassword) == std::string::npos);

  clock.advance(std::chrono::minutes(31));
  CHECK(code_of([&] { svc.authenticate(s.token); }) == ErrorCode::Unauthorized);
}

TEST_CASE("credential hashing") {
  const auto h = hash_credential("pw", 1000);
  CHECK(verify_credential("pw", h));
  CHECK_FALSE(verify_credential("pW", h));
  CHECK(hash_credential("pw", 1000) != h);  // salted
  CHECK_FALSE(verify_credential("pw", "garbage"));
}

TEST_CASE("upload is idempotent per client id") {
  World w;
  for (int i = 0; i < 5; ++i) {
    const auto r = w.svc.upload_recording(w.anna, fixture::upload("rec-1"));
    CHECK(r.created == (i == 0));
  }
  CHECK(w.svc.list_recordings(w.anna).size() == 1);
  CHECK(w.svc.store().pending_jobs() == 1);
  CHECK(code_of([&] { w.svc.upload_recording(w.ben, fixture::upload("rec-1")); }) == ErrorCode::DuplicateId);
  CHECK(code_of([&] { w.svc.upload_recording(w.sam, fixture::upload("rec-2")); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, fixture::upload("bad id/..")); }) ==
        ErrorCode::ValidationError);

  auto empty = fixture::upload("rec-3");
  empty.recording.audio.clear();
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, empty); }) == ErrorCode::ValidationError);
  auto french = fixture::upload("rec-4");
  french.recording.language = "fr";
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, french); }) == ErrorCode::ValidationError);
  auto mislabeled = fixture::upload("rec-5");
  mislabeled.recording.media_type = "audio/ogg";
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, mislabeled); }) == ErrorCode::ValidationError);
  CHECK(w.svc.list_recordings(w.anna).size() == 1);
}

TEST_CASE("oversize payload stores nothing") {
  auto cfg = fixture::service_config();
  cfg.max_audio_bytes = 1000;
  World w(cfg);
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, fixture::upload("big")); }) == ErrorCode::PayloadTooLarge);
  CHECK(w.svc.list_recordings(w.root).empty());
  CHECK(w.svc.store().pending_jobs() == 0);
  CHECK(w.svc.store().references_to("big") == 0);
}

TEST_CASE("speech-to-text pipeline") {
  World w;
  w.svc.upload_recording(w.anna, fixture::upload("r1", "The app loses the GPS signal in the field."));
  CHECK(code_of([&] { w.svc.get_transcript(w.anna, "r1"); }) == ErrorCode::Pending);
  CHECK(code_of([&] { w.svc.get_analysis(w.anna, "r1"); }) == ErrorCode::Pending);
  CHECK(w.svc.drain_jobs() == 2);

  const auto t = w.svc.get_transcript(w.anna, "r1");
  CHECK(t.text == "The app loses the GPS signal in the field.");
  CHECK_FALSE(t.edited);
  CHECK(w.svc.get_recording(w.anna, "r1").status == RecordingStatus::Complete);
  const auto a = w.svc.get_analysis(w.anna, "r1");
  CHECK(a["keywords"]["status"] == "complete");
  CHECK(a["audio_emotion"]["status"] == "absent");

  const auto edited = w.svc.edit_transcript(w.anna, "r1", "The app loses signal.");
  CHECK(edited.edited);
  CHECK(w.svc.get_transcript(w.anna, "r1").text == "The app loses signal.");
  CHECK(code_of([&] { w.svc.edit_transcript(w.rita, "r1", "x"); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.get_recording(w.anna, "nope"); }) == ErrorCode::NotFound);
}

TEST_CASE("audio sentiment upload queues only the emotion job") {
  World w;
  auto req = fixture::upload("asa-1");
  req.recording.capture = CaptureModule::AudioSentiment;
  req.recording.audio = fixture::wav_audio(1600, 32000);
  w.svc.upload_recording(w.anna, req);
  CHECK(w.svc.store().pending_jobs() == 1);
  CHECK(w.svc.drain_jobs() == 1);
  CHECK(code_of([&] { w.svc.get_transcript(w.anna, "asa-1"); }) == ErrorCode::NotFound);
  const auto a = w.svc.get_analysis(w.anna, "asa-1");
  CHECK(a["audio_emotion"]["status"] == "complete");
  CHECK(a["audio_emotion"]["value"]["emotion"] == "angry");
  CHECK(a["keywords"]["status"] == "absent");
}

TEST_CASE("engine outage keeps the recording pending") {
  Engines engines;
  engines.stt = std::make_shared<DownEngine>();
  World w(fixture::service_config(), engines);
  w.svc.upload_recording(w.anna, fixture::upload("r1"));
  CHECK(w.svc.run_one_job());
  CHECK(w.svc.get_recording(w.anna, "r1").status == RecordingStatus::Pending);
  CHECK(w.svc.store().pending_jobs() == 1);
  CHECK(code_of([&] { w.svc.get_transcript(w.anna, "r1"); }) == ErrorCode::Pending);
  CHECK_FALSE(w.svc.store().transcript("r1").has_value());
}

TEST_CASE("submissions and support roles") {
  World w;
  w.svc.upload_recording(w.anna, fixture::upload("r1", "slow sync"));
  auto asa = fixture::upload("a1");
  asa.recording.capture = CaptureModule::AudioSentiment;
  w.svc.upload_recording(w.anna, asa);
  w.svc.upload_recording(w.anna, fixture::upload("r2"));
  w.svc.drain_jobs();

  // support personnel only see submitted recordings
  CHECK(w.svc.list_recordings(w.sam).empty());
  CHECK(code_of([&] { w.svc.get_recording(w.sam, "r1"); }) == ErrorCode::Forbidden);

  const auto edited = w.svc.submit_feedback(w.anna, {"r1", "transcript", "sync is slow"});
  CHECK(edited.edited);
  CHECK(edited.text == "sync is slow");
  const auto audio = w.svc.submit_feedback(w.anna, {"a1", "audio", std::nullopt});
  CHECK(audio.choice == "audio");
  CHECK_FALSE(audio.edited);
  CHECK(code_of([&] { w.svc.submit_feedback(w.anna, {"a1", "transcript", std::nullopt}); }) ==
        ErrorCode::MissingTranscript);
  CHECK(code_of([&] { w.svc.submit_feedback(w.sam, {"r2", "audio", std::nullopt}); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.submit_feedback(w.ben, {"r2", "audio", std::nullopt}); }) == ErrorCode::Forbidden);

  CHECK(w.svc.list_recordings(w.sam).size() == 2);
  CHECK(w.svc.get_recording(w.sam, "r1").recording.id.str() == "r1");
  CHECK(w.svc.list_submissions(w.sam).size() == 2);
  CHECK(w.svc.list_submissions(w.ben).empty());

  CHECK(w.svc.set_priority(w.sam, edited.id, "high").priority == "high");
  CHECK(code_of([&] { w.svc.set_priority(w.anna, edited.id, "low"); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.set_priority(w.sam, edited.id, "urgent"); }) == ErrorCode::ValidationError);
  CHECK(code_of([&] { w.svc.set_priority(w.sam, 999, "low"); }) == ErrorCode::NotFound);
}

TEST_CASE("recordings are visible to owner and requirements engineers") {
  World w;
  w.svc.upload_recording(w.anna, fixture::upload("r1"));
  CHECK(code_of([&] { w.svc.get_recording(w.ben, "r1"); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.get_audio(w.ben, "r1"); }) == ErrorCode::Forbidden);
  CHECK(w.svc.list_recordings(w.ben).empty());
  CHECK(w.svc.list_recordings(w.rita).size() == 1);
  CHECK(w.svc.get_audio(w.anna, "r1") == fixture::wav_audio());
}

TEST_CASE("baseline reports") {
  World w;
  upload_study(w);
  CHECK(code_of([&] { w.svc.get_report(w.anna, "study", ReportFormat::Csv); }) == ErrorCode::Pending);
  w.svc.drain_jobs();

  const auto csv = w.svc.get_report(w.anna, "study", ReportFormat::Csv);
  CHECK(csv == fixture::read_text(std::string(FV_GOLDEN) + "/report.csv"));
  CHECK(csv.starts_with(
      "participant,setting,wer,levenshtein,target_bytes,byte_difference,target_characters,character_difference\n"));
  CHECK(w.svc.get_report(w.anna, "study", ReportFormat::Csv) == csv);
  const auto json = w.svc.get_report(w.anna, "study", ReportFormat::Json);
  CHECK(w.svc.get_report(w.rita, "study", ReportFormat::Json) == json);
  const auto doc = nlohmann::json::parse(json);
  CHECK(doc["baseline"]["source_bytes"] == 1597);
  CHECK(doc["baseline"]["source_characters"] == 1572);
  CHECK(doc["rows"].size() == 10);

  CHECK(code_of([&] { w.svc.get_report(w.ben, "study", ReportFormat::Json); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.get_report(w.anna, "nope", ReportFormat::Json); }) == ErrorCode::NotFound);

  // an edited transcript changes the report; the cached copy is dropped
  w.svc.edit_transcript(w.anna, "study-P5-office", "qqq rrr sss");
  const auto after = w.svc.get_report(w.anna, "study", ReportFormat::Csv);
  CHECK(after != csv);
  CHECK(after.find("P5,office,1.0000") != std::string::npos);
}

TEST_CASE("report restrictions") {
  World w;
  auto free = fixture::upload("ff-1");
  free.run_id = "free";
  w.svc.upload_recording(w.anna, free);
  w.svc.drain_jobs();
  CHECK(code_of([&] { w.svc.get_report(w.anna, "free", ReportFormat::Json); }) ==
        ErrorCode::ForbiddenForFreeForm);

  auto no_setting = fixture::baseline_upload("P1", NoiseSetting::Office);
  no_setting.recording.setting.reset();
  CHECK(code_of([&] { w.svc.upload_recording(w.anna, no_setting); }) == ErrorCode::ValidationError);

  auto cfg = fixture::service_config();
  cfg.baseline_text.reset();
  World bare(cfg);
  CHECK(code_of([&] {
          bare.svc.upload_recording(bare.anna, fixture::baseline_upload("P1", NoiseSetting::Office));
        }) == ErrorCode::MissingBaseline);
}

TEST_CASE("deletion cascades through every derived artifact") {
  World w;
  upload_study(w);
  w.svc.upload_recording(w.anna, fixture::upload("r1"));
  w.svc.upload_recording(w.ben, fixture::upload("b1"));
  w.svc.drain_jobs();
  w.svc.submit_feedback(w.anna, {"r1", "transcript", std::nullopt});
  w.svc.get_report(w.anna, "study", ReportFormat::Json);

  CHECK(code_of([&] { w.svc.delete_user_data(w.ben, {"r1", std::nullopt}); }) == ErrorCode::Forbidden);
  CHECK(code_of([&] { w.svc.delete_user_data(w.ben, {std::nullopt, "anna"}); }) == ErrorCode::Forbidden);

  const auto one = w.svc.delete_user_data(w.anna, {"r1", std::nullopt});
  CHECK(one.deleted.recordings == 1);
  CHECK(one.deleted.transcripts == 1);
  CHECK(one.deleted.analyses == 1);
  CHECK(one.deleted.submissions == 1);
  CHECK(w.svc.store().references_to("r1") == 0);
  CHECK(code_of([&] { w.svc.get_transcript(w.anna, "r1"); }) == ErrorCode::NotFound);

  // removing one study recording drops the cached report of its run
  w.svc.delete_user_data(w.anna, {"study-P1-office", std::nullopt});
  CHECK_FALSE(w.svc.store().cached_report("study", "json").has_value());

  const auto all = w.svc.delete_user_data(w.anna, {});
  CHECK(all.deleted.recordings == 9);
  CHECK(w.svc.list_recordings(w.anna).empty());
  for (const char* p : {"P1", "P2", "P3", "P4", "P5"}) {
    for (const char* s : {"office", "field"}) {
      CHECK(w.svc.store().references_to(std::string("study-") + p + "-" + s) == 0);
    }
  }
  CHECK(w.svc.list_recordings(w.ben).size() == 1);

  const auto admin = w.svc.delete_user_data(w.root, {std::nullopt, "ben"});
  CHECK(admin.deleted.recordings == 1);
  CHECK(w.svc.store().references_to("b1") == 0);
  CHECK(to_json(admin)["deleted"]["recordings"] == 1);
}

TEST_CASE("interrupted jobs leave recordings pending across restarts") {
  const auto path = temp_store("crash.db");
  {
    World w(fixture::service_config(path.string()));
    w.svc.upload_recording(w.anna, fixture::upload("r1", "hello field"));
    const auto job = w.svc.store().claim_job(0);  // a worker picks it up, then the process dies
    REQUIRE(job);
    CHECK(job->recording_id == "r1");
  }
  {
    World w(fixture::service_config(path.string()));
    const auto row = w.svc.get_recording(w.anna, "r1");
    CHECK(row.status == RecordingStatus::Pending);
    CHECK_FALSE(w.svc.store().transcript("r1").has_value());
    CHECK(w.svc.store().pending_jobs() == 1);
    w.svc.drain_jobs();
    CHECK(w.svc.get_transcript(w.anna, "r1").text == "hello field");
  }
}

TEST_CASE("workers process the queue in the background") {
  World w;
  w.svc.start_workers();
  w.svc.upload_recording(w.anna, fixture::upload("r1", "rain again"));
  for (int i = 0; i < 200 && w.svc.store().pending_jobs() > 0; ++i) {
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  w.svc.stop_workers();
  CHECK(w.svc.store().pending_jobs() == 0);
  CHECK(w.svc.get_transcript(w.anna, "r1").text == "rain again");
}

TEST_CASE("retention purges by age") {
  auto cfg = fixture::service_config();
  cfg.retention.audio = std::chrono::hours(24);
  cfg.retention.transcript = std::chrono::hours(24 * 10);
  fixture::ManualClock clock;
  World w(cfg, {}, clock);
  w.svc.upload_recording(w.anna, fixture::upload("r1"));
  w.svc.drain_jobs();

  CHECK(w.svc.apply_retention().audio == 0);
  clock.advance(std::chrono::hours(25));
  w.svc.upload_recording(w.anna, fixture::upload("r2"));
  const auto first = w.svc.apply_retention();
  CHECK(first.audio == 1);
  CHECK(first.transcripts == 0);
  CHECK(code_of([&] { w.svc.get_audio(w.anna, "r1"); }) == ErrorCode::NotFound);
  CHECK(w.svc.get_audio(w.anna, "r2").size() > 0);
  CHECK(w.svc.get_recording(w.anna, "r1").audio_purged);
  CHECK(w.svc.get_transcript(w.anna, "r1").text == "the field is dry");

  clock.advance(std::chrono::hours(24 * 10));
  CHECK(w.svc.apply_retention().transcripts == 1);
  CHECK(code_of([&] { w.svc.get_transcript(w.anna, "r1"); }) == ErrorCode::NotFound);
}

TEST_CASE("configuration parsing") {
  const auto cfg = config_from_json(nlohmann::json::parse(R"({
      "port": 9000, "store_path": "db/fv.db", "workers": 3,
      "retention": {"audio_days": 30, "transcript_days": null},
      "stt": {"kind": "http", "url": "http://stt:5000", "timeout_ms": 100},
      "accounts": [{"name": "x", "password": "p", "role": "farmer"}]})"),
                                    "/etc/farmvoice");
  CHECK(cfg.port == 9000);
  CHECK(cfg.store_path == "/etc/farmvoice/db/fv.db");
  CHECK(cfg.workers == 3);
  CHECK(cfg.retention.audio == std::chrono::hours(24 * 30));
  CHECK_FALSE(cfg.retention.transcript.has_value());
  CHECK(cfg.stt.kind == "http");
  CHECK(cfg.stt.endpoint.timeout == std::chrono::milliseconds(100));
  CHECK(cfg.accounts.size() == 1);

  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"port": "x"})"), "."); }) == ErrorCode::ParseError);
  CHECK(code_of([] { config_from_json(nlohmann::json::parse(R"({"stt": {"kind": "magic"}})"), "."); }) ==
        ErrorCode::ParseError);

  ServiceConfig env_cfg;
  apply_env_overrides(env_cfg, [](const std::string& k) -> std::optional<std::string> {
    if (k == "FARMVOICE_PORT") return "7000";
    if (k == "FARMVOICE_STT_URL") return "http://engine:1";
    if (k == "FARMVOICE_AUDIO_RETENTION_DAYS") return "7";
    return std::nullopt;
  });
  CHECK(env_cfg.port == 7000);
  CHECK(env_cfg.stt.kind == "http");
  CHECK(env_cfg.stt.endpoint.base_url == "http://engine:1");
  CHECK(env_cfg.retention.audio == std::chrono::hours(24 * 7));
}

TEST_CASE("client ids") {
  CHECK(valid_client_id("a1.B-c_d"));
  CHECK_FALSE(valid_client_id(""));
  CHECK_FALSE(valid_client_id("a/b"));
  CHECK_FALSE(valid_client_id(std::string(129, 'a')));
  CHECK(valid_client_id(std::string(128, 'a')));
}
