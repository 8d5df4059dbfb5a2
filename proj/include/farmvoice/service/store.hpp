#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "farmvoice/core/domain.hpp"

struct sqlite3;

namespace fv::service {

struct AccountRow {
  std::int64_t id = 0;
  std::string name;
  StakeholderRole role = StakeholderRole::Farmer;
  std::string credential;  // encoded hash, see auth.hpp
  Language language = Language::En;
  bool admin = false;
};

enum class RecordingStatus { Pending, Complete, Failed };

std::string_view to_string(RecordingStatus s) noexcept;

struct RecordingRow {
  FeedbackRecording recording;
  std::int64_t owner_id = 0;
  std::optional<std::string> run_id;
  std::optional<std::string> participant;
  std::optional<std::string> spoken_text;  // known text, consumed by the mock engine
  RecordingStatus status = RecordingStatus::Pending;
  std::string status_detail;
  bool audio_purged = false;
};

struct TranscriptRow {
  Transcript transcript;
  std::int64_t updated_at = 0;
};

struct SubmissionRow {
  std::int64_t id = 0;
  std::string recording_id;
  std::int64_t account_id = 0;
  std::string choice;  // transcript | audio
  std::optional<std::string> text;
  bool edited = false;
  std::optional<std::string> priority;
  std::int64_t created_at = 0;
};

enum class JobKind { Transcribe, Analyze };

std::string_view to_string(JobKind k) noexcept;

struct Job {
  std::string recording_id;
  JobKind kind = JobKind::Transcribe;
  int attempts = 0;
};

/// Counts of removed artifacts per kind.
struct DeletionCounts {
  std::size_t recordings = 0;
  std::size_t audio = 0;
  std::size_t transcripts = 0;
  std::size_t analyses = 0;
  std::size_t submissions = 0;
  std::size_t reports = 0;
  std::size_t jobs = 0;

  DeletionCounts& operator+=(const DeletionCounts& o);
};

/// Embedded SQLite persistence. All calls are serialized on one
/// connection; multi-row changes run inside a transaction.
class Store {
 public:
  explicit Store(const std::string& path);  // ":memory:" for an in-memory store
  ~Store();
  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  // accounts
  std::int64_t upsert_account(const AccountRow& account);  // role kept if the name exists
  std::optional<AccountRow> account_by_name(const std::string& name);
  std::optional<AccountRow> account_by_id(std::int64_t id);

  // sessions, keyed by the SHA-256 of the token
  void insert_session(const std::string& token_hash, std::int64_t account_id, std::int64_t expires_at);
  std::optional<std::int64_t> session_account(const std::string& token_hash, std::int64_t now);
  void delete_expired_sessions(std::int64_t now);

  // recordings; insert is a no-op returning false when the id exists
  bool insert_recording(const RecordingRow& row, const std::vector<JobKind>& jobs, std::int64_t now);
  std::optional<RecordingRow> recording(const std::string& id, bool with_audio = true);
  std::vector<RecordingRow> recordings(std::optional<std::int64_t> owner_id);
  std::vector<RecordingRow> recordings_in_run(const std::string& run_id);
  bool run_exists(const std::string& run_id);

  // transcripts
  std::optional<TranscriptRow> transcript(const std::string& recording_id);
  /// Updates the transcript of an existing recording and invalidates
  /// cached reports of its run.
  void put_edited_transcript(const Transcript& t, std::int64_t now);

  // analyses
  std::optional<std::string> analysis(const std::string& recording_id);

  // submissions
  std::int64_t insert_submission(const SubmissionRow& row);
  std::vector<SubmissionRow> submissions(std::optional<std::int64_t> account_id);
  std::optional<SubmissionRow> submission(std::int64_t id);
  void set_priority(std::int64_t id, const std::string& priority);
  bool recording_submitted(const std::string& recording_id);

  // job queue (at-least-once)
  std::optional<Job> claim_job(std::int64_t now);
  /// Commits the transcript, marks the recording complete, finishes the
  /// job and enqueues the analysis job in one transaction. An existing
  /// edited transcript is never overwritten.
  void complete_transcription(const Transcript& t, std::int64_t now);
  void complete_analysis(const std::string& recording_id, const std::string& json, bool final, std::int64_t now,
                         std::int64_t retry_at);
  void fail_job(const Job& job, const std::string& detail, std::int64_t now);
  void retry_job(const Job& job, const std::string& detail, std::int64_t retry_at);
  std::size_t reset_running_jobs();
  std::size_t pending_jobs();
  bool has_open_job(const std::string& recording_id);

  // report cache
  std::optional<std::string> cached_report(const std::string& run_id, const std::string& format);
  void cache_report(const std::string& run_id, const std::string& format, const std::string& bytes,
                    std::int64_t now);

  // deletion and retention
  DeletionCounts delete_recording(const std::string& id);
  DeletionCounts delete_account_data(std::int64_t account_id);
  DeletionCounts purge_older_than(std::optional<std::int64_t> audio_before, std::optional<std::int64_t> transcript_before,
                                  std::optional<std::int64_t> analysis_before, std::optional<std::int64_t> report_before);

  /// Number of rows in any table that mention the recording id.
  std::size_t references_to(const std::string& recording_id);

 private:
  DeletionCounts delete_recording_locked(const std::string& id);
  void exec(const char* sql);

  std::recursive_mutex mutex_;
  sqlite3* db_ = nullptr;
};

}  // namespace fv::service
