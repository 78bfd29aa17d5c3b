#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "forge/feedback/model.hpp"
#include "forge/sandbox/backend.hpp"
#include "forge/sandbox/execution.hpp"

namespace forge::judge {

inline constexpr std::int64_t kDefaultTimeLimitS = 30;
inline constexpr std::int64_t kDefaultMemoryLimitBytes = 256LL * 1024 * 1024;
inline constexpr std::int64_t kDefaultOutputLimitBytes = 10LL * 1024 * 1024;

struct JudgeMetadata {
    std::filesystem::path submission_path;
    std::filesystem::path resources_path;
    std::filesystem::path judge_path;
    std::filesystem::path workdir_path;
    std::string programming_language;
    std::string natural_language = "en";
    std::int64_t time_limit = kDefaultTimeLimitS;       // seconds
    std::int64_t memory_limit = kDefaultMemoryLimitBytes;
    std::int64_t output_limit = kDefaultOutputLimitBytes;
};

std::string serialize_metadata(const JudgeMetadata& metadata);
std::optional<JudgeMetadata> parse_metadata(const std::string& doc, std::string* error = nullptr);

struct JudgeBundle {
    std::string name;
    std::filesystem::path root_path;
    std::filesystem::path entry = "run";
    std::string default_image = "host-process";

    std::filesystem::path entry_path() const { return root_path / entry; }
};

// Loads <dir>/judge.json (optional) and verifies the entry executable.
std::optional<JudgeBundle> load_judge_bundle(const std::filesystem::path& dir, std::string* error = nullptr);

JudgeMetadata build_judge_metadata(const sandbox::WorkspaceLayout& layout,
                                   const std::string& programming_language,
                                   const std::string& natural_language,
                                   std::optional<std::int64_t> time_limit,
                                   std::optional<std::int64_t> memory_limit,
                                   std::optional<std::int64_t> output_limit);

struct InvokeOptions {
    bool network_allowed = false;
    // Container backend: workspace roots mapped to fixed in-sandbox paths.
    std::vector<sandbox::Mount> mounts;
};

// Runs the bundle entry point in the given backend, feeds it the metadata
// document on stdin, and parses its stdout. Never throws for judge
// misbehavior: anything short of valid feedback becomes a well-formed
// tree (internal-error, or the matching limit status).
feedback::FeedbackTree invoke_judge(const JudgeBundle& bundle,
                                    const JudgeMetadata& metadata,
                                    sandbox::Backend& backend,
                                    const InvokeOptions& options = {});

}  // namespace forge::judge
