#include "forge/sched/scheduler.hpp"

#include "forge/feedback/wire.hpp"
#include "forge/sandbox/backend.hpp"

namespace forge::sched {

Scheduler::Scheduler(Store& store, AssessFn assess, HardCapFn hard_cap, ActivityKindFn activity_kind,
                     SchedulerConfig config)
    : store_(store),
      assess_(std::move(assess)),
      hard_cap_(std::move(hard_cap)),
      activity_kind_(std::move(activity_kind)),
      config_(config) {}

std::variant<std::int64_t, EnqueueError> Scheduler::enqueue(const EnqueueRequest& request) {
    auto kind = activity_kind_(request.activity_id);
    if (!kind) return EnqueueError::UnknownActivity;
    if (*kind != repo::ActivityKind::Exercise) return EnqueueError::NotAnExercise;
    if (request.code.size() > config_.max_code_bytes) return EnqueueError::CodeTooLarge;

    SubmissionRecord record;
    record.user_id = request.user_id;
    record.course_id = request.course_id;
    record.series_id = request.series_id;
    record.activity_id = request.activity_id;
    record.code = request.code;
    record.submitted_at = request.submitted_at ? request.submitted_at : util::now_ms();
    // Durability before acknowledgment: the insert commits before the id
    // leaves this function.
    auto id = store_.insert_submission(record);
    notify();
    return id;
}

void Scheduler::finalize_with_engine_error(const SubmissionRecord& record, const std::string& detail) {
    auto tree = feedback::engine_feedback(
        feedback::Status::InternalError, "the assessment failed due to an internal error",
        {{feedback::MessageFormat::Plain, detail, feedback::Visibility::Staff}});
    store_.finalize(record.id, tree.status, feedback::canonical_serialize(tree));
}

bool Scheduler::run_one(const std::string& worker_id) {
    auto claimed = store_.claim_next(worker_id, util::now_ms());
    if (!claimed) return false;

    try {
        auto tree = assess_(*claimed);
        store_.finalize(claimed->id, tree.status, feedback::canonical_serialize(tree));
    } catch (const sandbox::BackendUnavailable& e) {
        if (claimed->attempt_count >= config_.max_attempts) {
            finalize_with_engine_error(*claimed, std::string("assessment infrastructure unavailable after ") +
                                                     std::to_string(claimed->attempt_count) +
                                                     " attempts: " + e.what());
        } else {
            store_.requeue(claimed->id);
            notify();
        }
    } catch (const std::exception& e) {
        // Anything else is a result, not a retry: a deterministic failure
        // would loop forever.
        finalize_with_engine_error(*claimed, std::string("assessment pipeline failed: ") + e.what());
    }
    return true;
}

std::vector<std::int64_t> Scheduler::reap_stalled(util::TimestampMs now) {
    std::vector<std::int64_t> requeued;
    for (const auto& record : store_.running_entries()) {
        if (!record.claimed_at) continue;
        double cap_s = hard_cap_(record) + config_.stall_margin_s;
        double running_s = static_cast<double>(now - *record.claimed_at) / 1000.0;
        if (running_s <= cap_s) continue;
        if (record.attempt_count >= config_.max_attempts) {
            finalize_with_engine_error(record, "assessment stalled " + std::to_string(record.attempt_count) +
                                                   " times; giving up");
        } else {
            store_.requeue(record.id);
            requeued.push_back(record.id);
        }
    }
    if (!requeued.empty()) notify();
    return requeued;
}

void Scheduler::wait_for_work(std::chrono::milliseconds timeout) {
    std::unique_lock lock(work_mutex_);
    work_cv_.wait_for(lock, timeout);
}

void Scheduler::notify() {
    work_cv_.notify_all();
}

std::int64_t Scheduler::queue_depth() {
    auto counts = store_.count_by_lifecycle();
    auto it = counts.find(Lifecycle::Queued);
    return it == counts.end() ? 0 : it->second;
}

WorkerPool::WorkerPool(Scheduler& scheduler, std::size_t workers) : scheduler_(scheduler) {
    if (workers == 0) workers = 1;
    for (std::size_t i = 0; i < workers; ++i) {
        threads_.emplace_back([this, i] {
            std::string worker_id = "worker-" + std::to_string(i);
            while (!stopping_.load()) {
                if (!scheduler_.run_one(worker_id)) {
                    scheduler_.wait_for_work(std::chrono::milliseconds(200));
                }
            }
        });
    }
    threads_.emplace_back([this] {
        int ticks = 0;
        while (!stopping_.load()) {
            scheduler_.wait_for_work(std::chrono::milliseconds(250));
            if (++ticks % 40 == 0) scheduler_.reap_stalled(util::now_ms());
        }
    });
}

WorkerPool::~WorkerPool() {
    stop();
}

void WorkerPool::stop() {
    if (stopping_.exchange(true)) return;
    scheduler_.notify();
    for (auto& t : threads_) {
        if (t.joinable()) t.join();
    }
}

}  // namespace forge::sched
