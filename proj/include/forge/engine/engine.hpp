#pragma once

#include <memory>

#include "forge/api/server.hpp"
#include "forge/engine/config.hpp"
#include "forge/engine/pipeline.hpp"
#include "forge/sched/scheduler.hpp"

namespace forge::engine {

// Owns and wires every service: store, registry, sandbox backend,
// scheduler, worker pool, HTTP server.
class Engine {
  public:
    explicit Engine(EngineConfig config);
    ~Engine();

    // Syncs every configured repository; returns per-repo reports.
    std::vector<repo::SyncReport> sync_all();

    void start_workers();
    bool start_api();
    void stop();

    // One-shot local assessment, bypassing the queue (CLI `assess`).
    feedback::FeedbackTree assess_local(const std::string& activity_id, const std::string& code,
                                        const std::string& natural_language = "en");

    const EngineConfig& config() const { return config_; }
    sched::Store& store() { return *store_; }
    sched::Scheduler& scheduler() { return *scheduler_; }
    repo::ActivityRegistry& registry() { return *registry_; }
    api::ApiServer& api() { return *api_; }

  private:
    EngineConfig config_;
    std::unique_ptr<sched::Store> store_;
    std::unique_ptr<sandbox::Backend> backend_;
    std::unique_ptr<repo::ActivityRegistry> registry_;
    std::unique_ptr<PipelineContext> pipeline_;
    std::unique_ptr<sched::Scheduler> scheduler_;
    std::unique_ptr<sched::WorkerPool> pool_;
    std::unique_ptr<api::ApiServer> api_;
};

}  // namespace forge::engine
