#include "farmvoice/service/store.hpp"

#include <sqlite3.h>

#include <chrono>

#include "farmvoice/core/error.hpp"

namespace fv::service {

namespace {

constexpr const char* kSchema = R"SQL(
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS accounts (
  id INTEGER PRIMARY KEY,
  name TEXT NOT NULL UNIQUE,
  role TEXT NOT NULL,
  credential TEXT NOT NULL,
  language TEXT NOT NULL,
  admin INTEGER NOT NULL DEFAULT 0
);
CREATE TABLE IF NOT EXISTS sessions (
  token_hash TEXT PRIMARY KEY,
  account_id INTEGER NOT NULL REFERENCES accounts(id) ON DELETE CASCADE,
  expires_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS recordings (
  id TEXT PRIMARY KEY,
  owner_id INTEGER NOT NULL REFERENCES accounts(id),
  speaker TEXT NOT NULL,
  audio BLOB,
  audio_purged INTEGER NOT NULL DEFAULT 0,
  media_type TEXT NOT NULL,
  duration REAL NOT NULL,
  language TEXT NOT NULL,
  mode TEXT NOT NULL,
  capture TEXT NOT NULL,
  setting TEXT,
  run_id TEXT,
  participant TEXT,
  spoken_text TEXT,
  status TEXT NOT NULL,
  status_detail TEXT NOT NULL DEFAULT '',
  created_at INTEGER NOT NULL,
  received_at INTEGER NOT NULL
);
CREATE INDEX IF NOT EXISTS recordings_run ON recordings(run_id);
CREATE INDEX IF NOT EXISTS recordings_owner ON recordings(owner_id);
CREATE TABLE IF NOT EXISTS transcripts (
  recording_id TEXT PRIMARY KEY REFERENCES recordings(id) ON DELETE CASCADE,
  text TEXT NOT NULL,
  language TEXT NOT NULL,
  engine_id TEXT NOT NULL,
  edited INTEGER NOT NULL,
  updated_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS analyses (
  recording_id TEXT PRIMARY KEY REFERENCES recordings(id) ON DELETE CASCADE,
  json TEXT NOT NULL,
  updated_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS submissions (
  id INTEGER PRIMARY KEY,
  recording_id TEXT NOT NULL REFERENCES recordings(id) ON DELETE CASCADE,
  account_id INTEGER NOT NULL REFERENCES accounts(id),
  choice TEXT NOT NULL,
  text TEXT,
  edited INTEGER NOT NULL,
  priority TEXT,
  created_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS jobs (
  recording_id TEXT NOT NULL REFERENCES recordings(id) ON DELETE CASCADE,
  kind TEXT NOT NULL,
  status TEXT NOT NULL,
  attempts INTEGER NOT NULL DEFAULT 0,
  not_before INTEGER NOT NULL DEFAULT 0,
  last_error TEXT NOT NULL DEFAULT '',
  seq INTEGER NOT NULL,
  PRIMARY KEY (recording_id, kind)
);
CREATE TABLE IF NOT EXISTS reports (
  run_id TEXT NOT NULL,
  format TEXT NOT NULL,
  bytes BLOB NOT NULL,
  created_at INTEGER NOT NULL,
  PRIMARY KEY (run_id, format)
);
)SQL";

class Stmt {
 public:
  Stmt(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
      throw Error(ErrorCode::IoError, std::string("store: ") + sqlite3_errmsg(db));
    }
  }
  ~Stmt() { sqlite3_finalize(stmt_); }
  Stmt(const Stmt&) = delete;
  Stmt& operator=(const Stmt&) = delete;

  Stmt& bind(int i, const std::string& v) {
    sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
    return *this;
  }
  Stmt& bind(int i, std::string_view v) { return bind(i, std::string(v)); }
  Stmt& bind(int i, const char* v) { return bind(i, std::string(v)); }
  Stmt& bind(int i, std::int64_t v) {
    sqlite3_bind_int64(stmt_, i, v);
    return *this;
  }
  Stmt& bind(int i, int v) { return bind(i, static_cast<std::int64_t>(v)); }
  Stmt& bind(int i, bool v) { return bind(i, static_cast<std::int64_t>(v ? 1 : 0)); }
  Stmt& bind(int i, double v) {
    sqlite3_bind_double(stmt_, i, v);
    return *this;
  }
  Stmt& bind(int i, const std::vector<std::uint8_t>& v) {
    sqlite3_bind_blob(stmt_, i, v.empty() ? "" : static_cast<const void*>(v.data()), static_cast<int>(v.size()),
                      SQLITE_TRANSIENT);
    return *this;
  }
  template <typename T>
  Stmt& bind(int i, const std::optional<T>& v) {
    if (!v) {
      sqlite3_bind_null(stmt_, i);
      return *this;
    }
    return bind(i, *v);
  }

  bool step() {
    const int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    throw Error(ErrorCode::IoError, std::string("store: ") + sqlite3_errmsg(db_));
  }
  void run() {
    while (step()) {
    }
  }

  bool null(int c) const { return sqlite3_column_type(stmt_, c) == SQLITE_NULL; }
  std::int64_t i64(int c) const { return sqlite3_column_int64(stmt_, c); }
  double real(int c) const { return sqlite3_column_double(stmt_, c); }
  std::string text(int c) const {
    const auto* p = sqlite3_column_text(stmt_, c);
    return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(sqlite3_column_bytes(stmt_, c)))
             : std::string();
  }
  std::optional<std::string> opt_text(int c) const {
    if (null(c)) return std::nullopt;
    return text(c);
  }
  std::vector<std::uint8_t> blob(int c) const {
    const auto* p = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt_, c));
    const auto n = static_cast<std::size_t>(sqlite3_column_bytes(stmt_, c));
    return p ? std::vector<std::uint8_t>(p, p + n) : std::vector<std::uint8_t>();
  }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

class Transaction {
 public:
  explicit Transaction(sqlite3* db) : db_(db) { sqlite3_exec(db_, "BEGIN IMMEDIATE", nullptr, nullptr, nullptr); }
  ~Transaction() {
    if (!committed_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    if (sqlite3_exec(db_, "COMMIT", nullptr, nullptr, nullptr) != SQLITE_OK) {
      throw Error(ErrorCode::IoError, std::string("store: ") + sqlite3_errmsg(db_));
    }
    committed_ = true;
  }

 private:
  sqlite3* db_;
  bool committed_ = false;
};

template <typename E, typename Parse>
E parse_or_throw(const std::string& text, Parse parse) {
  auto v = parse(text);
  if (!v) throw Error(ErrorCode::IoError, "store: corrupt value '" + text + "'");
  return *v;
}

std::optional<RecordingStatus> parse_status(std::string_view s) {
  if (s == "pending") return RecordingStatus::Pending;
  if (s == "complete") return RecordingStatus::Complete;
  if (s == "failed") return RecordingStatus::Failed;
  return std::nullopt;
}

constexpr const char* kRecordingColumns =
    "id, owner_id, speaker, media_type, duration, language, mode, capture, setting, run_id, participant, "
    "spoken_text, status, status_detail, created_at, audio_purged";

RecordingRow read_recording(const Stmt& s, bool with_audio) {
  RecordingRow r;
  auto& rec = r.recording;
  rec.id = RecordingId(s.text(0));
  r.owner_id = s.i64(1);
  rec.speaker = s.text(2);
  rec.media_type = s.text(3);
  rec.duration_seconds = s.real(4);
  rec.language = s.text(5);
  rec.mode = parse_or_throw<FeedbackMode>(s.text(6), parse_mode);
  rec.capture = parse_or_throw<CaptureModule>(s.text(7), parse_capture);
  if (!s.null(8)) rec.setting = parse_or_throw<NoiseSetting>(s.text(8), parse_setting);
  r.run_id = s.opt_text(9);
  r.participant = s.opt_text(10);
  r.spoken_text = s.opt_text(11);
  r.status = parse_or_throw<RecordingStatus>(s.text(12), parse_status);
  r.status_detail = s.text(13);
  rec.created_at = Timestamp(std::chrono::seconds(s.i64(14)));
  r.audio_purged = s.i64(15) != 0;
  if (with_audio) rec.audio = s.blob(16);
  return r;
}

AccountRow read_account(const Stmt& s) {
  AccountRow a;
  a.id = s.i64(0);
  a.name = s.text(1);
  a.role = parse_or_throw<StakeholderRole>(s.text(2), parse_role);
  a.credential = s.text(3);
  a.language = parse_or_throw<Language>(s.text(4), parse_language);
  a.admin = s.i64(5) != 0;
  return a;
}

SubmissionRow read_submission(const Stmt& s) {
  SubmissionRow r;
  r.id = s.i64(0);
  r.recording_id = s.text(1);
  r.account_id = s.i64(2);
  r.choice = s.text(3);
  r.text = s.opt_text(4);
  r.edited = s.i64(5) != 0;
  r.priority = s.opt_text(6);
  r.created_at = s.i64(7);
  return r;
}

std::optional<JobKind> parse_job_kind(std::string_view s) {
  if (s == "transcribe") return JobKind::Transcribe;
  if (s == "analyze") return JobKind::Analyze;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RecordingStatus s) noexcept {
  switch (s) {
    case RecordingStatus::Pending: return "pending";
    case RecordingStatus::Complete: return "complete";
    case RecordingStatus::Failed: return "failed";
  }
  return "pending";
}

std::string_view to_string(JobKind k) noexcept { return k == JobKind::Transcribe ? "transcribe" : "analyze"; }

DeletionCounts& DeletionCounts::operator+=(const DeletionCounts& o) {
  recordings += o.recordings;
  audio += o.audio;
  transcripts += o.transcripts;
  analyses += o.analyses;
  submissions += o.submissions;
  reports += o.reports;
  jobs += o.jobs;
  return *this;
}

Store::Store(const std::string& path) {
  if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                      nullptr) != SQLITE_OK) {
    std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
    sqlite3_close(db_);
    db_ = nullptr;
    throw Error(ErrorCode::IoError, "cannot open store " + path + ": " + msg);
  }
  sqlite3_busy_timeout(db_, 5000);
  try {
    if (path != ":memory:") exec("PRAGMA journal_mode = WAL;");
    exec(kSchema);
  } catch (...) {
    sqlite3_close(db_);
    db_ = nullptr;
    throw;
  }
}

Store::~Store() { sqlite3_close(db_); }

void Store::exec(const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown";
    sqlite3_free(err);
    throw Error(ErrorCode::IoError, "store: " + msg);
  }
}

std::int64_t Store::upsert_account(const AccountRow& a) {
  std::lock_guard lock(mutex_);
  if (auto existing = account_by_name(a.name)) {
    Stmt s(db_, "UPDATE accounts SET credential = ?1, language = ?2, admin = ?3 WHERE id = ?4");
    s.bind(1, a.credential).bind(2, to_string(a.language)).bind(3, a.admin).bind(4, existing->id).run();
    return existing->id;
  }
  Stmt s(db_, "INSERT INTO accounts (name, role, credential, language, admin) VALUES (?1, ?2, ?3, ?4, ?5)");
  s.bind(1, a.name).bind(2, to_string(a.role)).bind(3, a.credential).bind(4, to_string(a.language)).bind(5, a.admin);
  s.run();
  return sqlite3_last_insert_rowid(db_);
}

std::optional<AccountRow> Store::account_by_name(const std::string& name) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT id, name, role, credential, language, admin FROM accounts WHERE name = ?1");
  s.bind(1, name);
  if (!s.step()) return std::nullopt;
  return read_account(s);
}

std::optional<AccountRow> Store::account_by_id(std::int64_t id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT id, name, role, credential, language, admin FROM accounts WHERE id = ?1");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_account(s);
}

void Store::insert_session(const std::string& token_hash, std::int64_t account_id, std::int64_t expires_at) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "INSERT INTO sessions (token_hash, account_id, expires_at) VALUES (?1, ?2, ?3)");
  s.bind(1, token_hash).bind(2, account_id).bind(3, expires_at).run();
}

std::optional<std::int64_t> Store::session_account(const std::string& token_hash, std::int64_t now) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT account_id FROM sessions WHERE token_hash = ?1 AND expires_at > ?2");
  s.bind(1, token_hash).bind(2, now);
  if (!s.step()) return std::nullopt;
  return s.i64(0);
}

void Store::delete_expired_sessions(std::int64_t now) {
  std::lock_guard lock(mutex_);
  Stmt(db_, "DELETE FROM sessions WHERE expires_at <= ?1").bind(1, now).run();
}

bool Store::insert_recording(const RecordingRow& r, const std::vector<JobKind>& jobs, std::int64_t now) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  {
    Stmt exists(db_, "SELECT 1 FROM recordings WHERE id = ?1");
    exists.bind(1, r.recording.id.str());
    if (exists.step()) return false;
  }
  const auto& rec = r.recording;
  Stmt s(db_,
         "INSERT INTO recordings (id, owner_id, speaker, media_type, duration, language, mode, capture, setting, "
         "run_id, participant, spoken_text, status, status_detail, created_at, received_at, audio_purged, audio) "
         "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, ?9, ?10, ?11, ?12, ?13, '', ?14, ?16, 0, ?15)");
  std::optional<std::string> setting;
  if (rec.setting) setting = std::string(to_string(*rec.setting));
  s.bind(1, rec.id.str())
      .bind(2, r.owner_id)
      .bind(3, rec.speaker)
      .bind(4, rec.media_type)
      .bind(5, rec.duration_seconds)
      .bind(6, rec.language)
      .bind(7, to_string(rec.mode))
      .bind(8, to_string(rec.capture))
      .bind(9, setting)
      .bind(10, r.run_id)
      .bind(11, r.participant)
      .bind(12, r.spoken_text)
      .bind(13, to_string(jobs.empty() ? RecordingStatus::Complete : RecordingStatus::Pending))
      .bind(14, static_cast<std::int64_t>(
                    std::chrono::duration_cast<std::chrono::seconds>(rec.created_at.time_since_epoch()).count()))
      .bind(15, rec.audio)
      .bind(16, now);
  s.run();
  for (JobKind k : jobs) {
    Stmt j(db_,
           "INSERT OR IGNORE INTO jobs (recording_id, kind, status, seq) VALUES (?1, ?2, 'pending', "
           "(SELECT COALESCE(MAX(seq), 0) + 1 FROM jobs))");
    j.bind(1, rec.id.str()).bind(2, to_string(k)).run();
  }
  if (r.run_id) Stmt(db_, "DELETE FROM reports WHERE run_id = ?1").bind(1, *r.run_id).run();
  (void)now;
  tx.commit();
  return true;
}

std::optional<RecordingRow> Store::recording(const std::string& id, bool with_audio) {
  std::lock_guard lock(mutex_);
  const std::string sql = std::string("SELECT ") + kRecordingColumns + (with_audio ? ", audio" : "") +
                          " FROM recordings WHERE id = ?1";
  Stmt s(db_, sql.c_str());
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_recording(s, with_audio);
}

std::vector<RecordingRow> Store::recordings(std::optional<std::int64_t> owner_id) {
  std::lock_guard lock(mutex_);
  const std::string sql = std::string("SELECT ") + kRecordingColumns +
                          " FROM recordings WHERE ?1 IS NULL OR owner_id = ?1 ORDER BY created_at, id";
  Stmt s(db_, sql.c_str());
  s.bind(1, owner_id);
  std::vector<RecordingRow> out;
  while (s.step()) out.push_back(read_recording(s, false));
  return out;
}

std::vector<RecordingRow> Store::recordings_in_run(const std::string& run_id) {
  std::lock_guard lock(mutex_);
  const std::string sql =
      std::string("SELECT ") + kRecordingColumns + " FROM recordings WHERE run_id = ?1 ORDER BY id";
  Stmt s(db_, sql.c_str());
  s.bind(1, run_id);
  std::vector<RecordingRow> out;
  while (s.step()) out.push_back(read_recording(s, false));
  return out;
}

bool Store::run_exists(const std::string& run_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT 1 FROM recordings WHERE run_id = ?1 LIMIT 1");
  s.bind(1, run_id);
  return s.step();
}

std::optional<TranscriptRow> Store::transcript(const std::string& recording_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT text, language, engine_id, edited, updated_at FROM transcripts WHERE recording_id = ?1");
  s.bind(1, recording_id);
  if (!s.step()) return std::nullopt;
  TranscriptRow r;
  r.transcript.recording_id = RecordingId(recording_id);
  r.transcript.text = s.text(0);
  r.transcript.language = parse_or_throw<Language>(s.text(1), parse_language);
  r.transcript.engine_id = s.text(2);
  r.transcript.edited = s.i64(3) != 0;
  r.updated_at = s.i64(4);
  return r;
}

void Store::put_edited_transcript(const Transcript& t, std::int64_t now) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  Stmt s(db_,
         "INSERT INTO transcripts (recording_id, text, language, engine_id, edited, updated_at) "
         "VALUES (?1, ?2, ?3, ?4, ?5, ?6) ON CONFLICT(recording_id) DO UPDATE SET text = excluded.text, "
         "edited = excluded.edited, updated_at = excluded.updated_at");
  s.bind(1, t.recording_id.str())
      .bind(2, t.text)
      .bind(3, to_string(t.language))
      .bind(4, t.engine_id)
      .bind(5, t.edited)
      .bind(6, now)
      .run();
  Stmt(db_, "DELETE FROM reports WHERE run_id = (SELECT run_id FROM recordings WHERE id = ?1)")
      .bind(1, t.recording_id.str())
      .run();
  tx.commit();
}

std::optional<std::string> Store::analysis(const std::string& recording_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT json FROM analyses WHERE recording_id = ?1");
  s.bind(1, recording_id);
  if (!s.step()) return std::nullopt;
  return s.text(0);
}

std::int64_t Store::insert_submission(const SubmissionRow& r) {
  std::lock_guard lock(mutex_);
  Stmt s(db_,
         "INSERT INTO submissions (recording_id, account_id, choice, text, edited, priority, created_at) "
         "VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7)");
  s.bind(1, r.recording_id)
      .bind(2, r.account_id)
      .bind(3, r.choice)
      .bind(4, r.text)
      .bind(5, r.edited)
      .bind(6, r.priority)
      .bind(7, r.created_at)
      .run();
  return sqlite3_last_insert_rowid(db_);
}

std::vector<SubmissionRow> Store::submissions(std::optional<std::int64_t> account_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_,
         "SELECT id, recording_id, account_id, choice, text, edited, priority, created_at FROM submissions "
         "WHERE ?1 IS NULL OR account_id = ?1 ORDER BY id");
  s.bind(1, account_id);
  std::vector<SubmissionRow> out;
  while (s.step()) out.push_back(read_submission(s));
  return out;
}

std::optional<SubmissionRow> Store::submission(std::int64_t id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_,
         "SELECT id, recording_id, account_id, choice, text, edited, priority, created_at FROM submissions "
         "WHERE id = ?1");
  s.bind(1, id);
  if (!s.step()) return std::nullopt;
  return read_submission(s);
}

void Store::set_priority(std::int64_t id, const std::string& priority) {
  std::lock_guard lock(mutex_);
  Stmt(db_, "UPDATE submissions SET priority = ?1 WHERE id = ?2").bind(1, priority).bind(2, id).run();
}

bool Store::recording_submitted(const std::string& recording_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT 1 FROM submissions WHERE recording_id = ?1 LIMIT 1");
  s.bind(1, recording_id);
  return s.step();
}

std::optional<Job> Store::claim_job(std::int64_t now) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  Stmt s(db_,
         "SELECT recording_id, kind, attempts FROM jobs WHERE status = 'pending' AND not_before <= ?1 "
         "ORDER BY seq LIMIT 1");
  s.bind(1, now);
  if (!s.step()) return std::nullopt;
  Job job{s.text(0), parse_or_throw<JobKind>(s.text(1), parse_job_kind), static_cast<int>(s.i64(2)) + 1};
  Stmt u(db_, "UPDATE jobs SET status = 'running', attempts = ?3 WHERE recording_id = ?1 AND kind = ?2");
  u.bind(1, job.recording_id).bind(2, to_string(job.kind)).bind(3, job.attempts).run();
  tx.commit();
  return job;
}

void Store::complete_transcription(const Transcript& t, std::int64_t now) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  Stmt s(db_,
         "INSERT INTO transcripts (recording_id, text, language, engine_id, edited, updated_at) "
         "VALUES (?1, ?2, ?3, ?4, 0, ?5) ON CONFLICT(recording_id) DO UPDATE SET text = excluded.text, "
         "engine_id = excluded.engine_id, updated_at = excluded.updated_at WHERE transcripts.edited = 0");
  s.bind(1, t.recording_id.str()).bind(2, t.text).bind(3, to_string(t.language)).bind(4, t.engine_id).bind(5, now);
  s.run();
  Stmt(db_, "UPDATE recordings SET status = 'complete', status_detail = '' WHERE id = ?1")
      .bind(1, t.recording_id.str())
      .run();
  Stmt(db_, "UPDATE jobs SET status = 'done', last_error = '' WHERE recording_id = ?1 AND kind = 'transcribe'")
      .bind(1, t.recording_id.str())
      .run();
  Stmt(db_,
       "INSERT INTO jobs (recording_id, kind, status, seq) VALUES (?1, 'analyze', 'pending', "
       "(SELECT COALESCE(MAX(seq), 0) + 1 FROM jobs)) ON CONFLICT(recording_id, kind) DO UPDATE SET "
       "status = 'pending', not_before = 0")
      .bind(1, t.recording_id.str())
      .run();
  Stmt(db_, "DELETE FROM reports WHERE run_id = (SELECT run_id FROM recordings WHERE id = ?1)")
      .bind(1, t.recording_id.str())
      .run();
  tx.commit();
}

void Store::complete_analysis(const std::string& recording_id, const std::string& json, bool final,
                              std::int64_t now, std::int64_t retry_at) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  Stmt(db_,
       "INSERT INTO analyses (recording_id, json, updated_at) VALUES (?1, ?2, ?3) "
       "ON CONFLICT(recording_id) DO UPDATE SET json = excluded.json, updated_at = excluded.updated_at")
      .bind(1, recording_id)
      .bind(2, json)
      .bind(3, now)
      .run();
  if (final) {
    Stmt(db_, "UPDATE jobs SET status = 'done', last_error = '' WHERE recording_id = ?1 AND kind = 'analyze'")
        .bind(1, recording_id)
        .run();
    Stmt(db_, "UPDATE recordings SET status = 'complete' WHERE id = ?1 AND capture = 'asa'").bind(1, recording_id).run();
  } else {
    Stmt(db_,
         "UPDATE jobs SET status = 'pending', not_before = ?2, last_error = 'engine unavailable' "
         "WHERE recording_id = ?1 AND kind = 'analyze'")
        .bind(1, recording_id)
        .bind(2, retry_at)
        .run();
  }
  tx.commit();
}

void Store::fail_job(const Job& job, const std::string& detail, std::int64_t now) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  Stmt(db_, "UPDATE jobs SET status = 'failed', last_error = ?3 WHERE recording_id = ?1 AND kind = ?2")
      .bind(1, job.recording_id)
      .bind(2, to_string(job.kind))
      .bind(3, detail)
      .run();
  Stmt(db_, "UPDATE recordings SET status = 'failed', status_detail = ?2 WHERE id = ?1")
      .bind(1, job.recording_id)
      .bind(2, detail)
      .run();
  (void)now;
  tx.commit();
}

void Store::retry_job(const Job& job, const std::string& detail, std::int64_t retry_at) {
  std::lock_guard lock(mutex_);
  Stmt(db_,
       "UPDATE jobs SET status = 'pending', not_before = ?3, last_error = ?4 WHERE recording_id = ?1 AND kind = ?2")
      .bind(1, job.recording_id)
      .bind(2, to_string(job.kind))
      .bind(3, retry_at)
      .bind(4, detail)
      .run();
}

std::size_t Store::reset_running_jobs() {
  std::lock_guard lock(mutex_);
  Stmt(db_, "UPDATE jobs SET status = 'pending', not_before = 0 WHERE status = 'running'").run();
  return static_cast<std::size_t>(sqlite3_changes(db_));
}

std::size_t Store::pending_jobs() {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT COUNT(*) FROM jobs WHERE status IN ('pending', 'running')");
  s.step();
  return static_cast<std::size_t>(s.i64(0));
}

bool Store::has_open_job(const std::string& recording_id) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT 1 FROM jobs WHERE recording_id = ?1 AND status IN ('pending', 'running') LIMIT 1");
  s.bind(1, recording_id);
  return s.step();
}

std::optional<std::string> Store::cached_report(const std::string& run_id, const std::string& format) {
  std::lock_guard lock(mutex_);
  Stmt s(db_, "SELECT bytes FROM reports WHERE run_id = ?1 AND format = ?2");
  s.bind(1, run_id).bind(2, format);
  if (!s.step()) return std::nullopt;
  const auto b = s.blob(0);
  return std::string(b.begin(), b.end());
}

void Store::cache_report(const std::string& run_id, const std::string& format, const std::string& bytes,
                         std::int64_t now) {
  std::lock_guard lock(mutex_);
  Stmt(db_, "INSERT OR REPLACE INTO reports (run_id, format, bytes, created_at) VALUES (?1, ?2, ?3, ?4)")
      .bind(1, run_id)
      .bind(2, format)
      .bind(3, std::vector<std::uint8_t>(bytes.begin(), bytes.end()))
      .bind(4, now)
      .run();
}

namespace {

std::size_t count(sqlite3* db, const char* sql, const std::string& id) {
  Stmt s(db, sql);
  s.bind(1, id);
  s.step();
  return static_cast<std::size_t>(s.i64(0));
}

}  // namespace

DeletionCounts Store::delete_recording_locked(const std::string& id) {
  DeletionCounts c;
  Stmt r(db_, "SELECT audio IS NOT NULL, run_id FROM recordings WHERE id = ?1");
  r.bind(1, id);
  if (!r.step()) return c;
  c.recordings = 1;
  c.audio = r.i64(0) ? 1 : 0;
  const auto run_id = r.opt_text(1);
  c.transcripts = count(db_, "SELECT COUNT(*) FROM transcripts WHERE recording_id = ?1", id);
  c.analyses = count(db_, "SELECT COUNT(*) FROM analyses WHERE recording_id = ?1", id);
  c.submissions = count(db_, "SELECT COUNT(*) FROM submissions WHERE recording_id = ?1", id);
  c.jobs = count(db_, "SELECT COUNT(*) FROM jobs WHERE recording_id = ?1", id);
  if (run_id) {
    c.reports = count(db_, "SELECT COUNT(*) FROM reports WHERE run_id = ?1", *run_id);
    Stmt(db_, "DELETE FROM reports WHERE run_id = ?1").bind(1, *run_id).run();
  }
  // Child rows go through ON DELETE CASCADE.
  Stmt(db_, "DELETE FROM recordings WHERE id = ?1").bind(1, id).run();
  return c;
}

DeletionCounts Store::delete_recording(const std::string& id) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  auto c = delete_recording_locked(id);
  tx.commit();
  return c;
}

DeletionCounts Store::delete_account_data(std::int64_t account_id) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  std::vector<std::string> ids;
  {
    Stmt s(db_, "SELECT id FROM recordings WHERE owner_id = ?1");
    s.bind(1, account_id);
    while (s.step()) ids.push_back(s.text(0));
  }
  DeletionCounts c;
  for (const auto& id : ids) c += delete_recording_locked(id);
  // Submissions the account made on recordings it does not own.
  {
    Stmt s(db_, "SELECT COUNT(*) FROM submissions WHERE account_id = ?1");
    s.bind(1, account_id);
    s.step();
    c.submissions += static_cast<std::size_t>(s.i64(0));
  }
  Stmt(db_, "DELETE FROM submissions WHERE account_id = ?1").bind(1, account_id).run();
  tx.commit();
  return c;
}

DeletionCounts Store::purge_older_than(std::optional<std::int64_t> audio_before,
                                       std::optional<std::int64_t> transcript_before,
                                       std::optional<std::int64_t> analysis_before,
                                       std::optional<std::int64_t> report_before) {
  std::lock_guard lock(mutex_);
  Transaction tx(db_);
  DeletionCounts c;
  if (audio_before) {
    Stmt(db_, "UPDATE recordings SET audio = NULL, audio_purged = 1 WHERE audio IS NOT NULL AND received_at < ?1")
        .bind(1, *audio_before)
        .run();
    c.audio = static_cast<std::size_t>(sqlite3_changes(db_));
  }
  if (transcript_before) {
    Stmt(db_, "DELETE FROM transcripts WHERE updated_at < ?1").bind(1, *transcript_before).run();
    c.transcripts = static_cast<std::size_t>(sqlite3_changes(db_));
  }
  if (analysis_before) {
    Stmt(db_, "DELETE FROM analyses WHERE updated_at < ?1").bind(1, *analysis_before).run();
    c.analyses = static_cast<std::size_t>(sqlite3_changes(db_));
  }
  if (report_before) {
    Stmt(db_, "DELETE FROM reports WHERE created_at < ?1").bind(1, *report_before).run();
    c.reports = static_cast<std::size_t>(sqlite3_changes(db_));
  }
  tx.commit();
  return c;
}

std::size_t Store::references_to(const std::string& recording_id) {
  std::lock_guard lock(mutex_);
  std::size_t n = 0;
  for (const char* sql : {"SELECT COUNT(*) FROM recordings WHERE id = ?1",
                          "SELECT COUNT(*) FROM transcripts WHERE recording_id = ?1",
                          "SELECT COUNT(*) FROM analyses WHERE recording_id = ?1",
                          "SELECT COUNT(*) FROM submissions WHERE recording_id = ?1",
                          "SELECT COUNT(*) FROM jobs WHERE recording_id = ?1"}) {
    n += count(db_, sql, recording_id);
  }
  return n;
}

}  // namespace fv::service
