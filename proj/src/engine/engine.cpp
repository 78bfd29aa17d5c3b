#include "forge/engine/engine.hpp"

#include <thread>

namespace forge::engine {

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
    store_ = sched::make_sqlite_store(config_.store_path);
    backend_ = config_.backend == "container" ? sandbox::make_container_backend(config_.container_runtime)
                                              : sandbox::make_host_process_backend();
    registry_ = std::make_unique<repo::ActivityRegistry>(
        config_.repos, config_.judges_dir,
        std::shared_ptr<repo::GitFetcher>(repo::make_cli_git_fetcher()));

    auto languages = config_.user_languages;
    pipeline_ = std::make_unique<PipelineContext>(PipelineContext{
        *registry_, *backend_, config_.workspace_root,
        [languages](const std::string& user_id) {
            auto it = languages.find(user_id);
            return it == languages.end() ? std::string("en") : it->second;
        }});

    sched::SchedulerConfig sched_config;
    sched_config.max_code_bytes = config_.submission_max_bytes;
    scheduler_ = std::make_unique<sched::Scheduler>(
        *store_, [this](const sched::SubmissionRecord& r) { return assess_submission(*pipeline_, r); },
        [this](const sched::SubmissionRecord& r) { return submission_hard_cap_s(*pipeline_, r); },
        [this](const std::string& activity_id) -> std::optional<repo::ActivityKind> {
            auto activity = registry_->find(activity_id);
            if (!activity) return std::nullopt;
            return activity->kind;
        },
        sched_config);

    api_ = std::make_unique<api::ApiServer>(
        api::ApiDeps{*store_, *scheduler_, *registry_, config_.courses, config_.export_key,
                     config_.rate_limit_per_min},
        config_.listen_host, config_.listen_port);
}

Engine::~Engine() {
    stop();
}

std::vector<repo::SyncReport> Engine::sync_all() {
    std::vector<repo::SyncReport> reports;
    for (const auto& repo : config_.repos) reports.push_back(registry_->sync(repo.id));
    return reports;
}

void Engine::start_workers() {
    if (pool_) return;
    std::size_t workers = config_.workers ? config_.workers : std::thread::hardware_concurrency();
    pool_ = std::make_unique<sched::WorkerPool>(*scheduler_, workers);
}

bool Engine::start_api() {
    return api_->start();
}

void Engine::stop() {
    if (api_) api_->stop();
    if (pool_) {
        pool_->stop();
        pool_.reset();
    }
}

feedback::FeedbackTree Engine::assess_local(const std::string& activity_id, const std::string& code,
                                            const std::string& natural_language) {
    sched::SubmissionRecord record;
    record.id = 0;
    record.user_id = "local";
    record.activity_id = activity_id;
    record.code = code;
    record.submitted_at = util::now_ms();

    PipelineContext local = *pipeline_;
    local.natural_language = [natural_language](const std::string&) { return natural_language; };
    return assess_submission(local, record);
}

}  // namespace forge::engine
