#include <sqlite3.h>

#include <mutex>

#include "forge/sched/store.hpp"

namespace forge::sched {

namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS submissions (
    id            INTEGER PRIMARY KEY AUTOINCREMENT,
    user_id       TEXT NOT NULL,
    course_id     TEXT NOT NULL,
    series_id     TEXT NOT NULL,
    activity_id   TEXT NOT NULL,
    code          BLOB NOT NULL,
    submitted_at  INTEGER NOT NULL,
    lifecycle     TEXT NOT NULL CHECK (lifecycle IN ('queued','running','assessed')),
    result_status TEXT,
    feedback      TEXT,
    attempt_count INTEGER NOT NULL DEFAULT 0,
    claimed_by    TEXT,
    claimed_at    INTEGER,
    claim_seq     INTEGER
);
CREATE INDEX IF NOT EXISTS submissions_by_lifecycle ON submissions (lifecycle, id);
CREATE INDEX IF NOT EXISTS submissions_by_course ON submissions (course_id, id);
CREATE TABLE IF NOT EXISTS tokens (
    secret_hash TEXT PRIMARY KEY,
    user_id     TEXT NOT NULL,
    scopes      TEXT NOT NULL,
    created_at  INTEGER NOT NULL
);
)sql";

class Statement {
  public:
    Statement(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) {
            throw StoreError(std::string("prepare failed: ") + sqlite3_errmsg(db));
        }
    }
    ~Statement() { sqlite3_finalize(stmt_); }
    Statement(const Statement&) = delete;
    Statement& operator=(const Statement&) = delete;

    Statement& bind(int idx, std::int64_t v) {
        sqlite3_bind_int64(stmt_, idx, v);
        return *this;
    }
    Statement& bind(int idx, const std::string& v) {
        sqlite3_bind_text(stmt_, idx, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
        return *this;
    }
    Statement& bind_blob(int idx, const std::string& v) {
        sqlite3_bind_blob(stmt_, idx, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT);
        return *this;
    }
    Statement& bind_null(int idx) {
        sqlite3_bind_null(stmt_, idx);
        return *this;
    }

    bool step() {
        int rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        throw StoreError(std::string("step failed: ") + sqlite3_errmsg(db_));
    }

    std::int64_t col_int(int idx) { return sqlite3_column_int64(stmt_, idx); }
    bool col_null(int idx) { return sqlite3_column_type(stmt_, idx) == SQLITE_NULL; }
    std::string col_text(int idx) {
        const auto* p = sqlite3_column_text(stmt_, idx);
        int n = sqlite3_column_bytes(stmt_, idx);
        return p ? std::string(reinterpret_cast<const char*>(p), static_cast<std::size_t>(n)) : std::string();
    }
    std::string col_blob(int idx) {
        const void* p = sqlite3_column_blob(stmt_, idx);
        int n = sqlite3_column_bytes(stmt_, idx);
        return p ? std::string(static_cast<const char*>(p), static_cast<std::size_t>(n)) : std::string();
    }

  private:
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

std::string join_scopes(const std::set<std::string>& scopes) {
    std::string out;
    for (const auto& s : scopes) {
        if (!out.empty()) out += ',';
        out += s;
    }
    return out;
}

std::set<std::string> split_scopes(const std::string& text) {
    std::set<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        if (end > start) out.insert(text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

class SqliteStore final : public Store {
  public:
    explicit SqliteStore(const std::filesystem::path& db_path) {
        std::error_code ec;
        if (db_path.has_parent_path()) std::filesystem::create_directories(db_path.parent_path(), ec);
        if (sqlite3_open(db_path.string().c_str(), &db_) != SQLITE_OK) {
            throw StoreError("cannot open store at " + db_path.string() + ": " + sqlite3_errmsg(db_));
        }
        exec("PRAGMA journal_mode=WAL");
        exec("PRAGMA synchronous=NORMAL");
        exec("PRAGMA busy_timeout=5000");
        exec(kSchema);
    }

    ~SqliteStore() override { sqlite3_close(db_); }

    std::int64_t insert_submission(const SubmissionRecord& r) override {
        std::lock_guard lock(mutex_);
        Statement st(db_,
                     "INSERT INTO submissions (user_id, course_id, series_id, activity_id, code, "
                     "submitted_at, lifecycle, attempt_count) VALUES (?,?,?,?,?,?,?,0)");
        st.bind(1, r.user_id)
            .bind(2, r.course_id)
            .bind(3, r.series_id)
            .bind(4, r.activity_id)
            .bind_blob(5, r.code)
            .bind(6, r.submitted_at)
            .bind(7, std::string(lifecycle_name(Lifecycle::Queued)));
        st.step();
        return sqlite3_last_insert_rowid(db_);
    }

    std::optional<SubmissionRecord> get_submission(std::int64_t id) override {
        std::lock_guard lock(mutex_);
        Statement st(db_, (std::string("SELECT ") + kColumns + " FROM submissions WHERE id = ?").c_str());
        st.bind(1, id);
        if (!st.step()) return std::nullopt;
        return read_record(st);
    }

    std::optional<SubmissionRecord> claim_next(const std::string& worker_id,
                                               util::TimestampMs now) override {
        std::lock_guard lock(mutex_);
        exec("BEGIN IMMEDIATE");
        try {
            std::optional<std::int64_t> id;
            {
                Statement st(db_, "SELECT id FROM submissions WHERE lifecycle='queued' ORDER BY id LIMIT 1");
                if (st.step()) id = st.col_int(0);
            }
            if (!id) {
                exec("COMMIT");
                return std::nullopt;
            }
            std::int64_t seq = 1;
            {
                Statement st(db_, "SELECT COALESCE(MAX(claim_seq), 0) + 1 FROM submissions");
                st.step();
                seq = st.col_int(0);
            }
            {
                Statement st(db_,
                             "UPDATE submissions SET lifecycle='running', claimed_by=?, claimed_at=?, "
                             "claim_seq=?, attempt_count=attempt_count+1 WHERE id=?");
                st.bind(1, worker_id).bind(2, now).bind(3, seq).bind(4, *id);
                st.step();
            }
            exec("COMMIT");
            return get_unlocked(*id);
        } catch (...) {
            exec_nothrow("ROLLBACK");
            throw;
        }
    }

    void requeue(std::int64_t id) override {
        std::lock_guard lock(mutex_);
        Statement st(db_,
                     "UPDATE submissions SET lifecycle='queued', claimed_by=NULL, claimed_at=NULL "
                     "WHERE id=? AND lifecycle='running'");
        st.bind(1, id);
        st.step();
    }

    void finalize(std::int64_t id, feedback::Status status, const std::string& feedback_doc) override {
        std::lock_guard lock(mutex_);
        Statement st(db_,
                     "UPDATE submissions SET lifecycle='assessed', result_status=?, feedback=? WHERE id=?");
        st.bind(1, std::string(feedback::status_name(status))).bind(2, feedback_doc).bind(3, id);
        st.step();
    }

    std::vector<SubmissionRecord> running_entries() override {
        std::lock_guard lock(mutex_);
        Statement st(db_, (std::string("SELECT ") + kColumns +
                           " FROM submissions WHERE lifecycle='running' ORDER BY id")
                              .c_str());
        std::vector<SubmissionRecord> out;
        while (st.step()) out.push_back(read_record(st));
        return out;
    }

    std::vector<SubmissionRecord> list_submissions(const SubmissionFilter& filter) override {
        std::lock_guard lock(mutex_);
        std::string sql = std::string("SELECT ") + kColumns + " FROM submissions WHERE 1=1";
        if (filter.course_id) sql += " AND course_id = ?";
        if (filter.user_id) sql += " AND user_id = ?";
        if (filter.activity_id) sql += " AND activity_id = ?";
        sql += " ORDER BY id";
        Statement st(db_, sql.c_str());
        int idx = 1;
        if (filter.course_id) st.bind(idx++, *filter.course_id);
        if (filter.user_id) st.bind(idx++, *filter.user_id);
        if (filter.activity_id) st.bind(idx++, *filter.activity_id);
        std::vector<SubmissionRecord> out;
        while (st.step()) out.push_back(read_record(st));
        return out;
    }

    std::map<Lifecycle, std::int64_t> count_by_lifecycle() override {
        std::lock_guard lock(mutex_);
        Statement st(db_, "SELECT lifecycle, COUNT(*) FROM submissions GROUP BY lifecycle");
        std::map<Lifecycle, std::int64_t> out;
        while (st.step()) {
            if (auto lc = lifecycle_from_name(st.col_text(0))) out[*lc] = st.col_int(1);
        }
        return out;
    }

    std::map<feedback::Status, std::int64_t> count_by_status() override {
        std::lock_guard lock(mutex_);
        Statement st(db_,
                     "SELECT result_status, COUNT(*) FROM submissions WHERE result_status IS NOT NULL "
                     "GROUP BY result_status");
        std::map<feedback::Status, std::int64_t> out;
        while (st.step()) {
            if (auto s = feedback::status_from_name(st.col_text(0))) out[*s] = st.col_int(1);
        }
        return out;
    }

    void put_token(const TokenInfo& token) override {
        std::lock_guard lock(mutex_);
        Statement st(db_,
                     "INSERT OR REPLACE INTO tokens (secret_hash, user_id, scopes, created_at) "
                     "VALUES (?,?,?,?)");
        st.bind(1, token.secret_hash)
            .bind(2, token.user_id)
            .bind(3, join_scopes(token.scopes))
            .bind(4, token.created_at);
        st.step();
    }

    std::optional<TokenInfo> find_token(const std::string& secret_hash) override {
        std::lock_guard lock(mutex_);
        Statement st(db_, "SELECT secret_hash, user_id, scopes, created_at FROM tokens WHERE secret_hash=?");
        st.bind(1, secret_hash);
        if (!st.step()) return std::nullopt;
        TokenInfo info;
        info.secret_hash = st.col_text(0);
        info.user_id = st.col_text(1);
        info.scopes = split_scopes(st.col_text(2));
        info.created_at = st.col_int(3);
        return info;
    }

  private:
    static constexpr const char* kColumns =
        "id, user_id, course_id, series_id, activity_id, code, submitted_at, lifecycle, "
        "result_status, feedback, attempt_count, claimed_by, claimed_at, claim_seq";

    void exec(const char* sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql, nullptr, nullptr, &err) != SQLITE_OK) {
            std::string message = err ? err : "unknown sqlite error";
            sqlite3_free(err);
            throw StoreError(message);
        }
    }
    void exec_nothrow(const char* sql) { sqlite3_exec(db_, sql, nullptr, nullptr, nullptr); }

    std::optional<SubmissionRecord> get_unlocked(std::int64_t id) {
        Statement st(db_, (std::string("SELECT ") + kColumns + " FROM submissions WHERE id = ?").c_str());
        st.bind(1, id);
        if (!st.step()) return std::nullopt;
        return read_record(st);
    }

    static SubmissionRecord read_record(Statement& st) {
        SubmissionRecord r;
        r.id = st.col_int(0);
        r.user_id = st.col_text(1);
        r.course_id = st.col_text(2);
        r.series_id = st.col_text(3);
        r.activity_id = st.col_text(4);
        r.code = st.col_blob(5);
        r.submitted_at = st.col_int(6);
        r.lifecycle = lifecycle_from_name(st.col_text(7)).value_or(Lifecycle::Queued);
        if (!st.col_null(8)) r.result_status = feedback::status_from_name(st.col_text(8));
        if (!st.col_null(9)) r.feedback_doc = st.col_text(9);
        r.attempt_count = static_cast<int>(st.col_int(10));
        if (!st.col_null(11)) r.claimed_by = st.col_text(11);
        if (!st.col_null(12)) r.claimed_at = st.col_int(12);
        if (!st.col_null(13)) r.claim_seq = st.col_int(13);
        return r;
    }

    sqlite3* db_ = nullptr;
    std::mutex mutex_;
};

}  // namespace

std::unique_ptr<Store> make_sqlite_store(const std::filesystem::path& db_path) {
    return std::make_unique<SqliteStore>(db_path);
}

}  // namespace forge::sched
