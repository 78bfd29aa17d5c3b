#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/analytics/course.hpp"
#include "forge/repo/registry.hpp"

namespace forge::engine {

struct EngineConfig {
    std::filesystem::path store_path = "forge.db";
    std::filesystem::path judges_dir = "judges";
    std::filesystem::path workspace_root = "workspaces";
    std::string backend = "host-process";  // or "container"
    std::string container_runtime = "docker";
    std::size_t workers = 0;  // 0: number of processing units
    std::string listen_host = "127.0.0.1";
    int listen_port = 8080;
    std::size_t submission_max_bytes = 64 * 1024;
    int rate_limit_per_min = 30;
    std::string export_key = "forge-export";
    std::vector<repo::RepoConfig> repos;
    std::vector<analytics::Course> courses;
    // user id → preferred natural language tag
    std::map<std::string, std::string> user_languages;
};

std::optional<EngineConfig> parse_engine_config(const std::string& text, std::string* error = nullptr);
std::optional<EngineConfig> load_engine_config(const std::filesystem::path& path,
                                               std::string* error = nullptr);

}  // namespace forge::engine
