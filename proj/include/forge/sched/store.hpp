#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <vector>

#include "forge/sched/submission.hpp"

namespace forge::sched {

struct StoreError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TokenInfo {
    std::string secret_hash;  // sha256 hex of the presented secret
    std::string user_id;
    std::set<std::string> scopes;  // submit, read, admin
    util::TimestampMs created_at = 0;
};

struct SubmissionFilter {
    std::optional<std::string> course_id;
    std::optional<std::string> user_id;
    std::optional<std::string> activity_id;
};

// Durable state behind the scheduler and API. All operations are
// thread-safe; mutating operations are atomic and synced before return.
class Store {
  public:
    virtual ~Store() = default;

    virtual std::int64_t insert_submission(const SubmissionRecord& record) = 0;
    virtual std::optional<SubmissionRecord> get_submission(std::int64_t id) = 0;

    // Oldest queued entry → running, bound to worker_id, attempt_count
    // incremented, claim_seq assigned; nullopt when the queue is empty.
    virtual std::optional<SubmissionRecord> claim_next(const std::string& worker_id,
                                                      util::TimestampMs now) = 0;
    // running → queued, claim bookkeeping cleared, attempt_count kept.
    virtual void requeue(std::int64_t id) = 0;
    // → assessed with result and feedback document.
    virtual void finalize(std::int64_t id, feedback::Status status, const std::string& feedback_doc) = 0;

    virtual std::vector<SubmissionRecord> running_entries() = 0;
    virtual std::vector<SubmissionRecord> list_submissions(const SubmissionFilter& filter) = 0;
    virtual std::map<Lifecycle, std::int64_t> count_by_lifecycle() = 0;
    virtual std::map<feedback::Status, std::int64_t> count_by_status() = 0;

    virtual void put_token(const TokenInfo& token) = 0;
    virtual std::optional<TokenInfo> find_token(const std::string& secret_hash) = 0;
};

// Single-file embedded store (SQLite, WAL). Safe for concurrent use from
// one process; crash-durable at transaction granularity.
std::unique_ptr<Store> make_sqlite_store(const std::filesystem::path& db_path);

}  // namespace forge::sched
