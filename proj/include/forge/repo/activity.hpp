#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "forge/repo/config.hpp"

namespace forge::repo {

enum class ActivityKind { Exercise, Reading };
enum class Access { Public, Restricted };

enum class DescriptionFormat { Markdown, Html };

struct Description {
    DescriptionFormat format;
    std::string body;

    bool operator==(const Description&) const = default;
};

struct Activity {
    std::string id;  // sha256(repo_id ‖ rel_path), first 16 hex digits
    ActivityKind kind = ActivityKind::Exercise;
    std::string repo_id;
    std::string rel_path;
    std::map<std::string, Description> descriptions;  // language tag → document
    std::set<std::string> labels;
    Access access = Access::Public;
    ActivityConfig merged_config;                     // full root-to-leaf merge
    std::filesystem::path dir;                        // absolute activity directory
    std::filesystem::path resources_dir;              // <dir>/evaluation when present
    std::string content_digest;                       // change detection across syncs
};

struct ScanDiagnostic {
    std::string rel_path;
    std::string message;
};

struct ScanResult {
    std::vector<Activity> activities;  // sorted by rel_path
    std::vector<ScanDiagnostic> diagnostics;
};

std::string activity_id(const std::string& repo_id, const std::string& rel_path);

// Walks the tree, folding dirconfig.json defaults down to each directory
// holding a config.json. Malformed entries become diagnostics, never
// aborts. Throws std::runtime_error only when root itself is missing.
ScanResult scan_repository(const std::filesystem::path& root, const std::string& repo_id);

// preferred tag, else "en", else lexicographically first.
const Description* select_description(const Activity& activity, const std::string& preferred);

}  // namespace forge::repo
