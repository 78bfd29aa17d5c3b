#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "forge/feedback/model.hpp"
#include "forge/util/time.hpp"

namespace forge::sched {

enum class Lifecycle { Queued, Running, Assessed };

const char* lifecycle_name(Lifecycle lc);
std::optional<Lifecycle> lifecycle_from_name(std::string_view name);

// Immutable once stored except the lifecycle/result fields and the
// claim bookkeeping; submissions are never deleted.
struct SubmissionRecord {
    std::int64_t id = 0;  // assigned by the store, monotonically
    std::string user_id;
    std::string course_id;
    std::string series_id;
    std::string activity_id;
    std::string code;
    util::TimestampMs submitted_at = 0;
    Lifecycle lifecycle = Lifecycle::Queued;
    std::optional<feedback::Status> result_status;   // assessed only
    std::optional<std::string> feedback_doc;         // canonical wire form
    int attempt_count = 0;                           // claims so far
    std::optional<std::string> claimed_by;
    std::optional<util::TimestampMs> claimed_at;
    std::optional<std::int64_t> claim_seq;           // global claim order
};

}  // namespace forge::sched
