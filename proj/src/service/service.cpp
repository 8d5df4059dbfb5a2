#include "farmvoice/service/service.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "farmvoice/core/error.hpp"
#include "farmvoice/core/utf8.hpp"
#include "farmvoice/metrics/report.hpp"
#include "farmvoice/nlp/analysis.hpp"
#include "farmvoice/nlp/audio.hpp"
#include "farmvoice/service/auth.hpp"

namespace fv::service {

using nlohmann::json;

namespace {

std::int64_t seconds_of(Timestamp t) {
  return std::chrono::duration_cast<std::chrono::seconds>(t.time_since_epoch()).count();
}

bool is_privileged(const AccountRow& a) { return a.admin || a.role == StakeholderRole::RequirementsEngineer; }

bool accepted_media_type(std::string_view m, nlp::AudioContainer& expected) {
  if (m == "audio/wav" || m == "audio/x-wav" || m == "audio/wave" || m == "audio/vnd.wave") {
    expected = nlp::AudioContainer::Wav;
    return true;
  }
  if (m == "audio/ogg" || m == "audio/opus" || m == "application/ogg") {
    expected = nlp::AudioContainer::Ogg;
    return true;
  }
  return false;
}

std::optional<std::string> read_sidecar(const std::string& dir, const std::string& id) {
  if (dir.empty()) return std::nullopt;
  std::ifstream in(std::filesystem::path(dir) / (id + ".txt"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

bool valid_client_id(std::string_view id) noexcept {
  if (id.empty() || id.size() > kMaxIdLength) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' || c == '_' ||
           c == '-';
  });
}

FeedbackService::FeedbackService(ServiceConfig config, Engines engines, Clock clock)
    : config_(std::move(config)),
      clock_(clock ? std::move(clock) : Clock([] { return std::chrono::system_clock::now(); })),
      store_(std::make_unique<Store>(config_.store_path)),
      engines_(std::move(engines)) {
  if (config_.baseline_text) baseline_.emplace(*config_.baseline_text);

  if (!engines_.stt) {
    if (config_.stt.kind == "http") {
      stt::HttpEngineConfig hc;
      hc.endpoint = config_.stt.endpoint;
      engines_.stt = std::make_shared<stt::HttpEngine>(hc);
    } else {
      Store* store = store_.get();
      const std::string dir = config_.stt.sidecar_dir;
      stt::SidecarLookup lookup = [store, dir](const FeedbackRecording& rec) -> std::optional<std::string> {
        if (auto row = store->recording(rec.id.str(), false); row && row->spoken_text) return row->spoken_text;
        return read_sidecar(dir, rec.id.str());
      };
      engines_.stt = std::make_shared<stt::MockEngine>(config_.stt.seed, lookup);
    }
  }
  if (!engines_.emotion) {
    if (config_.emotion.kind == "http") {
      engines_.emotion = std::make_shared<nlp::HttpEmotionEngine>(config_.emotion.endpoint);
    } else {
      engines_.emotion = std::make_shared<nlp::LoudnessEmotionEngine>(config_.emotion.rms_threshold);
    }
  }
  if (!engines_.translator && config_.translation.target) {
    std::shared_ptr<nlp::TranslationEngine> engine;
    if (config_.translation.kind == "http") {
      engine = std::make_shared<nlp::HttpTranslationEngine>(config_.translation.endpoint);
    } else {
      engine = std::make_shared<nlp::StubTranslationEngine>();
    }
    engines_.translator = std::make_shared<nlp::Translator>(engine);
  }

  for (const auto& seed : config_.accounts) {
    AccountRow row;
    row.name = seed.name;
    row.role = seed.role;
    row.language = seed.language;
    row.admin = seed.admin;
    row.credential = seed.password_hash.empty() ? hash_credential(seed.password, config_.password_iterations)
                                                : seed.password_hash;
    store_->upsert_account(row);
    if (auto stored = store_->account_by_name(seed.name); stored && stored->role != seed.role) {
      std::cerr << "account " << seed.name << " keeps its original role " << to_string(stored->role) << '\n';
    }
  }
  dummy_credential_ = hash_credential("unused", config_.password_iterations);

  // Jobs claimed by a process that died are handed out again.
  store_->reset_running_jobs();
}

FeedbackService::~FeedbackService() { stop_workers(); }

std::int64_t FeedbackService::now_seconds() const { return seconds_of(clock_()); }

Session FeedbackService::login(const std::string& name, const std::string& password) {
  auto account = store_->account_by_name(name);
  const bool ok = verify_credential(password, account ? account->credential : dummy_credential_);
  if (!account || !ok) throw Error(ErrorCode::InvalidCredentials, "invalid credentials");
  Session s;
  s.token = new_session_token();
  s.account = *account;
  s.expires_at = clock_() + config_.session_ttl;
  store_->insert_session(token_digest(s.token), account->id, seconds_of(s.expires_at));
  return s;
}

AccountRow FeedbackService::authenticate(const std::string& token) {
  if (token.empty()) throw Error(ErrorCode::Unauthorized, "missing session token");
  const auto id = store_->session_account(token_digest(token), now_seconds());
  if (!id) throw Error(ErrorCode::Unauthorized, "invalid or expired session");
  auto account = store_->account_by_id(*id);
  if (!account) throw Error(ErrorCode::Unauthorized, "account no longer exists");
  return *account;
}

UploadResult FeedbackService::upload_recording(const AccountRow& caller, UploadRequest req) {
  if (caller.role != StakeholderRole::Farmer) throw Error(ErrorCode::Forbidden, "only farmers upload recordings");
  auto& rec = req.recording;
  if (!valid_client_id(rec.id.str())) throw Error(ErrorCode::ValidationError, "invalid recording id");
  if (rec.audio.size() > config_.max_audio_bytes) {
    throw Error(ErrorCode::PayloadTooLarge, "audio exceeds " + std::to_string(config_.max_audio_bytes) + " bytes");
  }
  if (auto existing = store_->recording(rec.id.str(), false)) {
    if (existing->owner_id != caller.id) throw Error(ErrorCode::DuplicateId, "recording id already taken");
    return {rec.id.str(), false};
  }
  if (auto err = validate_recording(rec)) {
    throw Error(ErrorCode::ValidationError, std::string("invalid recording: ") + std::string(to_string(*err)));
  }
  nlp::AudioContainer expected{};
  if (!accepted_media_type(rec.media_type, expected)) {
    throw Error(ErrorCode::ValidationError, "unsupported media type " + rec.media_type);
  }
  if (nlp::detect_container(rec.audio) != expected) {
    throw Error(ErrorCode::ValidationError, "audio content does not match " + rec.media_type);
  }
  if (expected == nlp::AudioContainer::Wav) {
    try {
      nlp::wav_loudness(rec.audio);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationError, std::string("unreadable WAV: ") + e.what());
    }
  }
  if (rec.mode == FeedbackMode::Baseline) {
    if (!rec.setting) throw Error(ErrorCode::ValidationError, "baseline recordings need a noise setting");
    if (!req.run_id) throw Error(ErrorCode::ValidationError, "baseline recordings need a run id");
    if (rec.capture != CaptureModule::SpeechToText) {
      throw Error(ErrorCode::ValidationError, "baseline recordings are captured for speech-to-text");
    }
    if (!baseline_) throw Error(ErrorCode::MissingBaseline, "no baseline text configured");
  }
  if (req.run_id && !valid_client_id(*req.run_id)) throw Error(ErrorCode::ValidationError, "invalid run id");
  if (req.spoken_text && !utf8::is_valid(*req.spoken_text)) {
    throw Error(ErrorCode::ValidationError, "spoken text is not UTF-8");
  }
  if (rec.speaker.empty()) rec.speaker = caller.name;
  if (rec.created_at == Timestamp{}) rec.created_at = clock_();

  RecordingRow row;
  row.recording = std::move(rec);
  row.owner_id = caller.id;
  row.run_id = req.run_id;
  row.participant = req.participant;
  row.spoken_text = req.spoken_text;
  const std::vector<JobKind> jobs = row.recording.capture == CaptureModule::AudioSentiment
                                        ? std::vector<JobKind>{JobKind::Analyze}
                                        : std::vector<JobKind>{JobKind::Transcribe};
  const std::string id = row.recording.id.str();
  if (!store_->insert_recording(row, jobs, now_seconds())) {
    // Lost a race against a concurrent upload of the same id.
    auto existing = store_->recording(id, false);
    if (!existing || existing->owner_id != caller.id) throw Error(ErrorCode::DuplicateId, "recording id already taken");
    return {id, false};
  }
  if (workers_) workers_->notify();
  return {id, true};
}

bool FeedbackService::can_read(const AccountRow& caller, const RecordingRow& row) {
  if (row.owner_id == caller.id || is_privileged(caller)) return true;
  return caller.role == StakeholderRole::SupportPersonnel && store_->recording_submitted(row.recording.id.str());
}

RecordingRow FeedbackService::readable_recording(const AccountRow& caller, const std::string& id) {
  auto row = store_->recording(id, false);
  if (!row) throw Error(ErrorCode::NotFound, "no recording " + id);
  if (!can_read(caller, *row)) throw Error(ErrorCode::Forbidden, "recording belongs to another account");
  return *row;
}

RecordingRow FeedbackService::get_recording(const AccountRow& caller, const std::string& id) {
  return readable_recording(caller, id);
}

std::vector<RecordingRow> FeedbackService::list_recordings(const AccountRow& caller) {
  if (is_privileged(caller)) return store_->recordings(std::nullopt);
  if (caller.role == StakeholderRole::SupportPersonnel) {
    auto all = store_->recordings(std::nullopt);
    std::erase_if(all, [&](const RecordingRow& r) { return !store_->recording_submitted(r.recording.id.str()); });
    return all;
  }
  return store_->recordings(caller.id);
}

std::vector<std::uint8_t> FeedbackService::get_audio(const AccountRow& caller, const std::string& id) {
  readable_recording(caller, id);
  auto row = store_->recording(id, true);
  if (!row || row->audio_purged) throw Error(ErrorCode::NotFound, "audio no longer retained");
  return row->recording.audio;
}

Transcript FeedbackService::get_transcript(const AccountRow& caller, const std::string& id) {
  const auto row = readable_recording(caller, id);
  if (auto t = store_->transcript(id)) return t->transcript;
  if (row.status == RecordingStatus::Pending && row.recording.capture == CaptureModule::SpeechToText) {
    throw Error(ErrorCode::Pending, "transcription pending");
  }
  throw Error(ErrorCode::NotFound, "recording has no transcript");
}

Transcript FeedbackService::edit_transcript(const AccountRow& caller, const std::string& id, const std::string& text) {
  const auto row = readable_recording(caller, id);
  if (row.owner_id != caller.id) throw Error(ErrorCode::Forbidden, "only the owner edits a transcript");
  if (!utf8::is_valid(text)) throw Error(ErrorCode::ValidationError, "transcript is not UTF-8");
  auto current = store_->transcript(id);
  if (!current) throw Error(ErrorCode::MissingTranscript, "recording has no transcript yet");
  Transcript t = current->transcript;
  t.text = text;
  t.edited = true;
  store_->put_edited_transcript(t, now_seconds());
  return t;
}

json FeedbackService::get_analysis(const AccountRow& caller, const std::string& id) {
  readable_recording(caller, id);
  if (auto a = store_->analysis(id)) return json::parse(*a);
  if (store_->has_open_job(id)) throw Error(ErrorCode::Pending, "analysis pending");
  throw Error(ErrorCode::NotFound, "recording has no analysis");
}

SubmissionRow FeedbackService::submit_feedback(const AccountRow& caller, const SubmitRequest& req) {
  if (caller.role != StakeholderRole::Farmer) throw Error(ErrorCode::Forbidden, "only farmers submit feedback");
  const auto row = readable_recording(caller, req.recording_id);
  if (row.owner_id != caller.id) throw Error(ErrorCode::Forbidden, "recording belongs to another account");
  SubmissionRow sub;
  sub.recording_id = req.recording_id;
  sub.account_id = caller.id;
  sub.choice = req.choice;
  sub.created_at = now_seconds();
  if (req.choice == "transcript") {
    auto current = store_->transcript(req.recording_id);
    if (!current) throw Error(ErrorCode::MissingTranscript, "no transcript to submit");
    Transcript t = current->transcript;
    if (req.edited_text && *req.edited_text != t.text) {
      if (!utf8::is_valid(*req.edited_text)) throw Error(ErrorCode::ValidationError, "text is not UTF-8");
      t.text = *req.edited_text;
      t.edited = true;
      store_->put_edited_transcript(t, sub.created_at);
    }
    sub.text = t.text;
    sub.edited = t.edited;
  } else if (req.choice == "audio") {
    if (req.edited_text) throw Error(ErrorCode::ValidationError, "edited text only applies to transcripts");
  } else {
    throw Error(ErrorCode::ValidationError, "choice must be transcript or audio");
  }
  sub.id = store_->insert_submission(sub);
  return sub;
}

std::vector<SubmissionRow> FeedbackService::list_submissions(const AccountRow& caller) {
  if (caller.role == StakeholderRole::Farmer && !caller.admin) return store_->submissions(caller.id);
  return store_->submissions(std::nullopt);
}

SubmissionRow FeedbackService::set_priority(const AccountRow& caller, std::int64_t id, const std::string& priority) {
  if (caller.role != StakeholderRole::SupportPersonnel && !caller.admin) {
    throw Error(ErrorCode::Forbidden, "only support personnel prioritize submissions");
  }
  if (priority != "low" && priority != "normal" && priority != "high") {
    throw Error(ErrorCode::ValidationError, "priority must be low, normal or high");
  }
  if (!store_->submission(id)) throw Error(ErrorCode::NotFound, "no submission " + std::to_string(id));
  store_->set_priority(id, priority);
  return *store_->submission(id);
}

std::string FeedbackService::get_report(const AccountRow& caller, const std::string& run_id, ReportFormat format) {
  const auto rows = store_->recordings_in_run(run_id);
  if (rows.empty()) throw Error(ErrorCode::NotFound, "no run " + run_id);
  const bool involved =
      std::any_of(rows.begin(), rows.end(), [&](const RecordingRow& r) { return r.owner_id == caller.id; });
  if (!involved && !is_privileged(caller)) throw Error(ErrorCode::Forbidden, "run belongs to other accounts");
  const bool has_baseline = std::any_of(
      rows.begin(), rows.end(), [](const RecordingRow& r) { return r.recording.mode == FeedbackMode::Baseline; });
  if (!has_baseline) {
    throw Error(ErrorCode::ForbiddenForFreeForm, "free-form runs have no baseline report; fetch analyses instead");
  }
  if (!baseline_) throw Error(ErrorCode::MissingBaseline, "no baseline text configured");

  const std::string key = format == ReportFormat::Json ? "json" : "csv";
  if (auto cached = store_->cached_report(run_id, key)) return *cached;

  metrics::ReportInput input;
  input.baseline = baseline_;
  input.policy = config_.normalization;
  std::vector<std::string> excluded;
  for (const auto& r : rows) {
    if (r.recording.mode != FeedbackMode::Baseline) continue;
    auto t = store_->transcript(r.recording.id.str());
    if (!t) {
      if (r.status == RecordingStatus::Pending) throw Error(ErrorCode::Pending, "transcription pending in run");
      excluded.push_back("ExcludedRecording: " + r.recording.id.str() + " has no transcript");
      continue;
    }
    std::string participant = r.participant.value_or("");
    if (participant.empty()) {
      auto owner = store_->account_by_id(r.owner_id);
      participant = owner ? owner->name : std::to_string(r.owner_id);
    }
    input.entries.push_back({participant, *r.recording.setting, t->transcript.text});
  }
  auto report = metrics::build_report(input);
  report.warnings.insert(report.warnings.end(), excluded.begin(), excluded.end());
  std::string bytes = format == ReportFormat::Json ? metrics::to_json(report) : metrics::to_csv(report);
  store_->cache_report(run_id, key, bytes, now_seconds());
  return bytes;
}

DeletionReceipt FeedbackService::delete_user_data(const AccountRow& caller, const DeletionScope& scope) {
  DeletionReceipt receipt;
  if (scope.recording) {
    auto row = store_->recording(*scope.recording, false);
    if (!row) throw Error(ErrorCode::NotFound, "no recording " + *scope.recording);
    if (row->owner_id != caller.id && !caller.admin) throw Error(ErrorCode::Forbidden, "not the owner");
    receipt.scope = "recording:" + *scope.recording;
    receipt.deleted = store_->delete_recording(*scope.recording);
    return receipt;
  }
  AccountRow target = caller;
  if (scope.account && *scope.account != caller.name) {
    if (!caller.admin) throw Error(ErrorCode::Forbidden, "only administrators delete other accounts' data");
    auto other = store_->account_by_name(*scope.account);
    if (!other) throw Error(ErrorCode::NotFound, "no account " + *scope.account);
    target = *other;
  }
  receipt.scope = "account:" + target.name;
  receipt.deleted = store_->delete_account_data(target.id);
  return receipt;
}

DeletionCounts FeedbackService::apply_retention() {
  const auto now = now_seconds();
  auto cutoff = [now](const std::optional<std::chrono::seconds>& age) -> std::optional<std::int64_t> {
    if (!age) return std::nullopt;
    return now - age->count();
  };
  const auto& r = config_.retention;
  return store_->purge_older_than(cutoff(r.audio), cutoff(r.transcript), cutoff(r.analysis), cutoff(r.report));
}

bool FeedbackService::run_one_job() {
  auto job = store_->claim_job(now_seconds());
  if (!job) return false;
  if (job->kind == JobKind::Transcribe) {
    process_transcription(*job);
  } else {
    process_analysis(*job);
  }
  return true;
}

std::size_t FeedbackService::drain_jobs() {
  std::size_t n = 0;
  while (run_one_job()) ++n;
  return n;
}

void FeedbackService::process_transcription(const Job& job) {
  auto row = store_->recording(job.recording_id, true);
  if (!row) return;  // deleted meanwhile
  const auto retry_at = now_seconds() + std::max<std::int64_t>(1, config_.retry_backoff.count() / 1000);
  try {
    if (row->audio_purged) {
      store_->fail_job(job, "audio no longer retained", now_seconds());
      return;
    }
    Transcript t = engines_.stt->transcribe(row->recording);
    store_->complete_transcription(t, now_seconds());
    if (workers_) workers_->notify();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::EngineUnavailable) {
      store_->retry_job(job, e.what(), retry_at);
    } else {
      store_->fail_job(job, e.what(), now_seconds());
    }
  }
}

void FeedbackService::process_analysis(const Job& job) {
  auto row = store_->recording(job.recording_id, true);
  if (!row) return;
  auto t = store_->transcript(job.recording_id);
  nlp::AnalysisConfig cfg;
  nlp::AnalysisDeps deps;
  deps.emotion = engines_.emotion.get();
  if (engines_.translator && config_.translation.target && t && t->transcript.language != *config_.translation.target) {
    cfg.translate_to = config_.translation.target;
    deps.translator = engines_.translator.get();
  }
  const Transcript* tp = t ? &t->transcript : nullptr;
  auto result = nlp::analyze(tp, row->audio_purged ? nullptr : &row->recording, cfg, deps);
  const bool pending = result.keywords.status == nlp::FieldStatus::Pending ||
                       result.summary.status == nlp::FieldStatus::Pending ||
                       result.text_sentiment.status == nlp::FieldStatus::Pending ||
                       result.audio_emotion.status == nlp::FieldStatus::Pending ||
                       result.translation.status == nlp::FieldStatus::Pending;
  const auto retry_at = now_seconds() + std::max<std::int64_t>(1, config_.retry_backoff.count() / 1000);
  store_->complete_analysis(job.recording_id, nlp::to_json(result).dump(), !pending, now_seconds(), retry_at);
}

void FeedbackService::start_workers() {
  if (workers_ || config_.workers == 0) return;
  workers_ = std::make_unique<WorkerPool>(config_.workers, [this] { return run_one_job(); });
}

void FeedbackService::stop_workers() {
  if (!workers_) return;
  workers_->stop();
  workers_.reset();
}

json to_json(const RecordingRow& row, const std::string& owner_name) {
  const auto& r = row.recording;
  json j;
  j["id"] = r.id.str();
  j["owner"] = owner_name;
  j["speaker"] = r.speaker;
  j["media_type"] = r.media_type;
  j["duration_seconds"] = r.duration_seconds;
  j["language"] = r.language;
  j["mode"] = to_string(r.mode);
  j["capture"] = to_string(r.capture);
  j["setting"] = r.setting ? json(to_string(*r.setting)) : json(nullptr);
  j["run_id"] = row.run_id ? json(*row.run_id) : json(nullptr);
  j["participant"] = row.participant ? json(*row.participant) : json(nullptr);
  j["status"] = to_string(row.status);
  if (!row.status_detail.empty()) j["status_detail"] = row.status_detail;
  j["audio_available"] = !row.audio_purged;
  j["created_at"] = format_timestamp(r.created_at);
  return j;
}

json to_json(const Transcript& t) {
  return json{{"recording_id", t.recording_id.str()},
              {"text", t.text},
              {"language", to_string(t.language)},
              {"engine_id", t.engine_id},
              {"edited", t.edited}};
}

json to_json(const SubmissionRow& s) {
  return json{{"id", s.id},
              {"recording_id", s.recording_id},
              {"choice", s.choice},
              {"text", s.text ? json(*s.text) : json(nullptr)},
              {"edited", s.edited},
              {"priority", s.priority ? json(*s.priority) : json(nullptr)},
              {"created_at", format_timestamp(Timestamp(std::chrono::seconds(s.created_at)))}};
}

json to_json(const DeletionReceipt& r) {
  const auto& d = r.deleted;
  return json{{"scope", r.scope},
              {"deleted",
               {{"recordings", d.recordings},
                {"audio", d.audio},
                {"transcripts", d.transcripts},
                {"analyses", d.analyses},
                {"submissions", d.submissions},
                {"reports", d.reports},
                {"jobs", d.jobs}}}};
}

}  // namespace fv::service
