#pragma once

#include <filesystem>
#include <functional>

#include "forge/feedback/model.hpp"
#include "forge/repo/registry.hpp"
#include "forge/sandbox/backend.hpp"
#include "forge/sched/submission.hpp"

namespace forge::engine {

// Whole-run wall cap applied to a judge invocation.
double judge_hard_cap_s(std::int64_t time_limit_s);

struct PipelineContext {
    repo::ActivityRegistry& registry;
    sandbox::Backend& backend;
    std::filesystem::path workspace_root;
    // Submitting user's preferred natural language; empty → "en".
    std::function<std::string(const std::string& user_id)> natural_language;
};

// Fig 2 in one call: resolve config, provision the workspace, build the
// metadata document, run the judge, return its (validated) feedback.
// Throws sandbox::BackendUnavailable for retryable infrastructure
// failures only; every other failure is reported inside the tree.
feedback::FeedbackTree assess_submission(const PipelineContext& ctx, const sched::SubmissionRecord& record);

// Hard cap for the stall reaper, from the activity's effective config.
double submission_hard_cap_s(const PipelineContext& ctx, const sched::SubmissionRecord& record);

}  // namespace forge::engine
