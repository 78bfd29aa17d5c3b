#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace forge::repo {

// Raw per-directory assessment settings; every field optional so that
// directory defaults (dirconfig.json) and leaf configs (config.json)
// share one shape.
struct ActivityConfig {
    std::optional<std::string> programming_language;
    std::optional<std::string> judge;
    std::optional<std::string> image;
    std::optional<std::int64_t> time_limit;    // seconds
    std::optional<std::int64_t> memory_limit;  // bytes
    std::optional<std::int64_t> output_limit;  // bytes
    std::optional<bool> network_allowed;
    std::optional<std::string> boilerplate;
    std::optional<std::string> kind;    // "exercise" | "reading"
    std::optional<std::string> access;  // "public" | "restricted"
    std::set<std::string> labels;

    bool operator==(const ActivityConfig&) const = default;
};

enum class ConfigParseMode { Strict, Lenient };

std::optional<ActivityConfig> parse_activity_config(std::string_view text,
                                                    ConfigParseMode mode = ConfigParseMode::Strict,
                                                    std::string* error = nullptr);

// Leaf precedence for scalars, union for labels.
ActivityConfig merge(const ActivityConfig& base, const ActivityConfig& overlay);

// Root-to-leaf fold of merge over the chain.
ActivityConfig resolve_chain(std::span<const ActivityConfig> chain);

// All assessment-critical settings concrete.
struct EffectiveConfig {
    std::string programming_language;
    std::string judge;
    std::string image;
    std::int64_t time_limit;
    std::int64_t memory_limit;
    std::int64_t output_limit;
    bool network_allowed;
    std::string boilerplate;
    std::set<std::string> labels;

    bool operator==(const EffectiveConfig&) const = default;
};

// Maps a judge name to its default image; empty result = unknown judge.
using JudgeImageLookup = std::function<std::optional<std::string>(const std::string&)>;

// Fills engine defaults; requires a resolvable judge. Unset image falls
// back to the judge's default image.
std::optional<EffectiveConfig> resolve_config(const ActivityConfig& merged,
                                              const JudgeImageLookup& judge_image,
                                              std::string* error = nullptr);

}  // namespace forge::repo
