#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "farmvoice/core/domain.hpp"
#include "farmvoice/nlp/emotion.hpp"
#include "farmvoice/nlp/translation.hpp"
#include "farmvoice/service/config.hpp"
#include "farmvoice/service/jobs.hpp"
#include "farmvoice/service/store.hpp"
#include "farmvoice/stt/engine.hpp"

namespace fv::service {

using Clock = std::function<Timestamp()>;

/// Engines left null are built from the configuration.
struct Engines {
  std::shared_ptr<stt::TranscriptionEngine> stt;
  std::shared_ptr<nlp::EmotionEngine> emotion;
  std::shared_ptr<nlp::Translator> translator;
};

struct Session {
  std::string token;
  AccountRow account;
  Timestamp expires_at;
};

struct UploadRequest {
  FeedbackRecording recording;
  std::optional<std::string> run_id;
  std::optional<std::string> participant;  // defaults to the account name in reports
  std::optional<std::string> spoken_text;  // known text for the mock engine
};

struct UploadResult {
  std::string id;
  bool created = false;
};

struct SubmitRequest {
  std::string recording_id;
  std::string choice;  // transcript | audio
  std::optional<std::string> edited_text;
};

enum class ReportFormat { Json, Csv };

std::optional<ReportFormat> parse_report_format(std::string_view text) noexcept;

/// Neither field set means all data of the caller.
struct DeletionScope {
  std::optional<std::string> recording;
  std::optional<std::string> account;  // administrators only, unless it names the caller
};

struct DeletionReceipt {
  std::string scope;
  DeletionCounts deleted;
};

inline constexpr std::size_t kMaxIdLength = 128;

/// Recording ids are client generated: 1-128 of [A-Za-z0-9._-].
bool valid_client_id(std::string_view id) noexcept;

class FeedbackService {
 public:
  FeedbackService(ServiceConfig config, Engines engines = {}, Clock clock = {});
  ~FeedbackService();
  FeedbackService(const FeedbackService&) = delete;
  FeedbackService& operator=(const FeedbackService&) = delete;

  /// Unknown accounts and wrong passwords both give
  /// Error{InvalidCredentials} after the same amount of hashing work.
  Session login(const std::string& name, const std::string& password);
  /// Error{Unauthorized} for unknown or expired tokens.
  AccountRow authenticate(const std::string& token);

  UploadResult upload_recording(const AccountRow& caller, UploadRequest request);
  RecordingRow get_recording(const AccountRow& caller, const std::string& id);
  std::vector<RecordingRow> list_recordings(const AccountRow& caller);
  std::vector<std::uint8_t> get_audio(const AccountRow& caller, const std::string& id);

  /// Error{Pending} while transcription is outstanding.
  Transcript get_transcript(const AccountRow& caller, const std::string& id);
  Transcript edit_transcript(const AccountRow& caller, const std::string& id, const std::string& text);
  nlohmann::json get_analysis(const AccountRow& caller, const std::string& id);

  SubmissionRow submit_feedback(const AccountRow& caller, const SubmitRequest& request);
  std::vector<SubmissionRow> list_submissions(const AccountRow& caller);
  SubmissionRow set_priority(const AccountRow& caller, std::int64_t submission_id, const std::string& priority);

  std::string get_report(const AccountRow& caller, const std::string& run_id, ReportFormat format);

  DeletionReceipt delete_user_data(const AccountRow& caller, const DeletionScope& scope);
  DeletionCounts apply_retention();

  /// Processes one ready job; false when none is ready.
  bool run_one_job();
  /// Runs jobs until none is ready; returns the number processed.
  std::size_t drain_jobs();
  void start_workers();
  /// Finishes in-flight jobs; queued jobs stay persisted for the next start.
  void stop_workers();

  Store& store() noexcept { return *store_; }
  const ServiceConfig& config() const noexcept { return config_; }
  Timestamp now() const { return clock_(); }

 private:
  bool can_read(const AccountRow& caller, const RecordingRow& row);
  RecordingRow readable_recording(const AccountRow& caller, const std::string& id);
  void process_transcription(const Job& job);
  void process_analysis(const Job& job);
  std::int64_t now_seconds() const;

  ServiceConfig config_;
  Clock clock_;
  std::unique_ptr<Store> store_;
  Engines engines_;
  std::string dummy_credential_;
  std::optional<BaselineText> baseline_;
  std::unique_ptr<WorkerPool> workers_;
};

nlohmann::json to_json(const RecordingRow& row, const std::string& owner_name);
nlohmann::json to_json(const Transcript& transcript);
nlohmann::json to_json(const SubmissionRow& row);
nlohmann::json to_json(const DeletionReceipt& receipt);

}  // namespace fv::service
