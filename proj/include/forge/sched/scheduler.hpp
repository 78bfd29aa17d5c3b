#pragma once

#include <atomic>
#include <condition_variable>
#include <functional>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "forge/repo/activity.hpp"
#include "forge/sched/store.hpp"

namespace forge::sched {

enum class EnqueueError { UnknownActivity, NotAnExercise, CodeTooLarge };

struct EnqueueRequest {
    std::string user_id;
    std::string course_id;
    std::string series_id;
    std::string activity_id;
    std::string code;
    util::TimestampMs submitted_at = 0;  // 0: stamped with now
};

struct SchedulerConfig {
    std::size_t max_code_bytes = 64 * 1024;
    int max_attempts = 3;
    // Requeue margin past the per-activity hard cap.
    double stall_margin_s = 60.0;
};

// Runs the full Fig 2 pipeline for one claimed submission; throws
// sandbox::BackendUnavailable on infrastructure failure (leading to a
// retry), returns a feedback tree otherwise.
using AssessFn = std::function<feedback::FeedbackTree(const SubmissionRecord&)>;

// Per-submission hard wall cap in seconds, for the stall reaper.
using HardCapFn = std::function<double(const SubmissionRecord&)>;

// Resolves activity kind for intake validation; nullopt = unknown.
using ActivityKindFn = std::function<std::optional<repo::ActivityKind>(const std::string&)>;

class Scheduler {
  public:
    Scheduler(Store& store, AssessFn assess, HardCapFn hard_cap, ActivityKindFn activity_kind,
              SchedulerConfig config = {});

    std::variant<std::int64_t, EnqueueError> enqueue(const EnqueueRequest& request);

    // Claim + assess one entry. False when the queue was empty. Judge
    // failures finalize as results; infrastructure failures requeue (or
    // finalize internal-error once attempts are exhausted).
    bool run_one(const std::string& worker_id);

    // Requeues entries running past their hard cap + margin; finalizes
    // those already at max_attempts. Returns requeued ids.
    std::vector<std::int64_t> reap_stalled(util::TimestampMs now);

    // Blocks until work may be available or shutdown; spurious wakeups fine.
    void wait_for_work(std::chrono::milliseconds timeout);
    void notify();

    std::int64_t queue_depth();

    const SchedulerConfig& config() const { return config_; }
    Store& store() { return store_; }

  private:
    void finalize_with_engine_error(const SubmissionRecord& record, const std::string& detail);

    Store& store_;
    AssessFn assess_;
    HardCapFn hard_cap_;
    ActivityKindFn activity_kind_;
    SchedulerConfig config_;

    std::mutex work_mutex_;
    std::condition_variable work_cv_;
};

// N worker threads looping claim/assess plus one periodic stall reaper.
class WorkerPool {
  public:
    WorkerPool(Scheduler& scheduler, std::size_t workers);
    ~WorkerPool();
    void stop();

  private:
    Scheduler& scheduler_;
    std::atomic<bool> stopping_{false};
    std::vector<std::thread> threads_;
};

}  // namespace forge::sched
