#include "forge/repo/config.hpp"

#include <json.hpp>

#include "forge/judge/protocol.hpp"

namespace forge::repo {

using nlohmann::json;

namespace {

const std::set<std::string> kKnownKeys = {
    "programming_language", "judge",  "image", "time_limit", "memory_limit", "output_limit",
    "network_allowed",      "boilerplate", "kind", "access", "labels",
};

}  // namespace

std::optional<ActivityConfig> parse_activity_config(std::string_view text, ConfigParseMode mode,
                                                    std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return fail("config is not a JSON object");

    if (mode == ConfigParseMode::Strict) {
        for (const auto& [key, value] : doc.items()) {
            if (!kKnownKeys.count(key)) return fail("unknown config key \"" + key + "\"");
        }
    }

    ActivityConfig cfg;
    try {
        if (doc.contains("programming_language"))
            cfg.programming_language = doc["programming_language"].get<std::string>();
        if (doc.contains("judge")) cfg.judge = doc["judge"].get<std::string>();
        if (doc.contains("image")) cfg.image = doc["image"].get<std::string>();
        if (doc.contains("time_limit")) cfg.time_limit = doc["time_limit"].get<std::int64_t>();
        if (doc.contains("memory_limit")) cfg.memory_limit = doc["memory_limit"].get<std::int64_t>();
        if (doc.contains("output_limit")) cfg.output_limit = doc["output_limit"].get<std::int64_t>();
        if (doc.contains("network_allowed")) cfg.network_allowed = doc["network_allowed"].get<bool>();
        if (doc.contains("boilerplate")) cfg.boilerplate = doc["boilerplate"].get<std::string>();
        if (doc.contains("kind")) cfg.kind = doc["kind"].get<std::string>();
        if (doc.contains("access")) cfg.access = doc["access"].get<std::string>();
        if (doc.contains("labels")) {
            for (const auto& label : doc["labels"]) cfg.labels.insert(label.get<std::string>());
        }
    } catch (const json::exception& e) {
        return fail(e.what());
    }
    if (cfg.kind && *cfg.kind != "exercise" && *cfg.kind != "reading") {
        return fail("kind must be \"exercise\" or \"reading\"");
    }
    if (cfg.access && *cfg.access != "public" && *cfg.access != "restricted") {
        return fail("access must be \"public\" or \"restricted\"");
    }
    if ((cfg.time_limit && *cfg.time_limit <= 0) || (cfg.memory_limit && *cfg.memory_limit <= 0) ||
        (cfg.output_limit && *cfg.output_limit <= 0)) {
        return fail("limits must be strictly positive");
    }
    return cfg;
}

ActivityConfig merge(const ActivityConfig& base, const ActivityConfig& overlay) {
    ActivityConfig out = base;
    if (overlay.programming_language) out.programming_language = overlay.programming_language;
    if (overlay.judge) out.judge = overlay.judge;
    if (overlay.image) out.image = overlay.image;
    if (overlay.time_limit) out.time_limit = overlay.time_limit;
    if (overlay.memory_limit) out.memory_limit = overlay.memory_limit;
    if (overlay.output_limit) out.output_limit = overlay.output_limit;
    if (overlay.network_allowed) out.network_allowed = overlay.network_allowed;
    if (overlay.boilerplate) out.boilerplate = overlay.boilerplate;
    if (overlay.kind) out.kind = overlay.kind;
    if (overlay.access) out.access = overlay.access;
    out.labels.insert(overlay.labels.begin(), overlay.labels.end());
    return out;
}

ActivityConfig resolve_chain(std::span<const ActivityConfig> chain) {
    ActivityConfig acc;
    for (const auto& cfg : chain) acc = merge(acc, cfg);
    return acc;
}

std::optional<EffectiveConfig> resolve_config(const ActivityConfig& merged,
                                              const JudgeImageLookup& judge_image,
                                              std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    if (!merged.judge) return fail("no judge configured");

    EffectiveConfig eff;
    eff.judge = *merged.judge;
    eff.programming_language = merged.programming_language.value_or("generic");
    if (merged.image) {
        eff.image = *merged.image;
    } else {
        auto def = judge_image(*merged.judge);
        if (!def) return fail("unknown judge \"" + *merged.judge + "\"");
        eff.image = *def;
    }
    eff.time_limit = merged.time_limit.value_or(judge::kDefaultTimeLimitS);
    eff.memory_limit = merged.memory_limit.value_or(judge::kDefaultMemoryLimitBytes);
    eff.output_limit = merged.output_limit.value_or(judge::kDefaultOutputLimitBytes);
    eff.network_allowed = merged.network_allowed.value_or(false);
    eff.boilerplate = merged.boilerplate.value_or("");
    eff.labels = merged.labels;
    return eff;
}

}  // namespace forge::repo
