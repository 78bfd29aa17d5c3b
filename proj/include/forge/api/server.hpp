#pragma once

#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "forge/analytics/course.hpp"
#include "forge/repo/registry.hpp"
#include "forge/sched/scheduler.hpp"
#include "forge/sched/store.hpp"

namespace forge::api {

// One row per exposed endpoint; the audit test walks this to assert
// that nothing mutating is reachable without a credential.
struct RouteInfo {
    std::string method;
    std::string path;
    bool requires_token;
    bool mutating;
    // Webhook bodies carry their own HMAC instead of a token.
    bool hmac_verified = false;
};

const std::vector<RouteInfo>& route_table();

struct ApiDeps {
    sched::Store& store;
    sched::Scheduler& scheduler;
    repo::ActivityRegistry& registry;
    std::vector<analytics::Course> courses;
    std::string export_key;
    int rate_limit_per_min = 30;
};

class ApiServer {
  public:
    ApiServer(ApiDeps deps, std::string host, int port);
    ~ApiServer();

    // Binds and serves on a background thread. port 0 picks a free port,
    // readable via port() afterwards.
    bool start();
    void stop();
    int port() const { return port_; }

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::string host_;
    int port_;
    std::thread thread_;
};

}  // namespace forge::api
