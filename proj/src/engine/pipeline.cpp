#include "forge/engine/pipeline.hpp"

#include "forge/judge/protocol.hpp"
#include "forge/sandbox/workspace.hpp"

namespace forge::engine {

double judge_hard_cap_s(std::int64_t time_limit_s) {
    return static_cast<double>(time_limit_s) * 2 + 30;
}

namespace {

feedback::FeedbackTree internal_error(const std::string& detail) {
    return feedback::engine_feedback(
        feedback::Status::InternalError, "the assessment failed due to an internal error",
        {{feedback::MessageFormat::Plain, detail, feedback::Visibility::Staff}});
}

}  // namespace

feedback::FeedbackTree assess_submission(const PipelineContext& ctx, const sched::SubmissionRecord& record) {
    auto activity = ctx.registry.find(record.activity_id);
    if (!activity) {
        return internal_error("activity " + record.activity_id + " no longer exists");
    }
    std::string error;
    auto config = ctx.registry.effective_config(*activity, &error);
    if (!config) {
        return internal_error("activity " + record.activity_id + " has no usable config: " + error);
    }
    const auto* bundle = ctx.registry.find_judge(config->judge);
    if (!bundle) {
        return internal_error("judge \"" + config->judge + "\" is not installed");
    }

    sandbox::Workspace workspace;
    try {
        workspace = sandbox::provision(ctx.workspace_root, record.code, bundle->root_path,
                                       activity->resources_dir);
    } catch (const sandbox::ProvisionError& e) {
        return internal_error(std::string("workspace provisioning failed: ") + e.what());
    }

    const bool containerized = ctx.backend.name() == "container";
    sandbox::WorkspaceLayout judge_view = workspace.layout();
    judge::InvokeOptions options;
    options.network_allowed = config->network_allowed;
    if (containerized) {
        // Inside the container the four roots live at fixed paths; the
        // writable workdir is the runtime's tmpfs, not a bind mount.
        const auto& host = workspace.layout();
        judge_view.root = "/";
        options.mounts = {
            {host.submission_dir(), "/submission", true},
            {host.judge_dir(), "/judge", true},
            {host.resources_dir(), "/resources", true},
        };
    }

    auto metadata = judge::build_judge_metadata(
        judge_view, config->programming_language,
        ctx.natural_language ? ctx.natural_language(record.user_id) : std::string(), config->time_limit,
        config->memory_limit, config->output_limit);

    judge::JudgeBundle run_bundle = *bundle;
    run_bundle.default_image = config->image;
    return judge::invoke_judge(run_bundle, metadata, ctx.backend, options);
}

double submission_hard_cap_s(const PipelineContext& ctx, const sched::SubmissionRecord& record) {
    std::int64_t time_limit = judge::kDefaultTimeLimitS;
    if (auto activity = ctx.registry.find(record.activity_id)) {
        if (auto config = ctx.registry.effective_config(*activity)) time_limit = config->time_limit;
    }
    return judge_hard_cap_s(time_limit);
}

}  // namespace forge::engine
