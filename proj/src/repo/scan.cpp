#include <algorithm>
#include <stdexcept>

#include "forge/repo/activity.hpp"
#include "forge/util/fs.hpp"
#include "forge/util/hashing.hpp"

namespace forge::repo {

namespace fs = std::filesystem;

std::string activity_id(const std::string& repo_id, const std::string& rel_path) {
    return util::sha256_hex(repo_id + rel_path).substr(0, 16);
}

namespace {

// description/description.<lang>.md|.html
bool load_descriptions(const fs::path& dir, Activity& activity) {
    auto desc_dir = dir / "description";
    std::error_code ec;
    if (!fs::is_directory(desc_dir, ec)) return false;
    for (const auto& entry : fs::directory_iterator(desc_dir, ec)) {
        if (!entry.is_regular_file()) continue;
        auto name = entry.path().filename().string();
        if (name.rfind("description.", 0) != 0) continue;
        auto rest = name.substr(12);
        DescriptionFormat format;
        std::string lang;
        if (rest.size() > 3 && rest.ends_with(".md")) {
            format = DescriptionFormat::Markdown;
            lang = rest.substr(0, rest.size() - 3);
        } else if (rest.size() > 5 && rest.ends_with(".html")) {
            format = DescriptionFormat::Html;
            lang = rest.substr(0, rest.size() - 5);
        } else {
            continue;
        }
        if (auto body = util::read_file(entry.path())) {
            activity.descriptions[lang] = Description{format, std::move(*body)};
        }
    }
    return !activity.descriptions.empty();
}

// Digest over everything that affects how the activity presents and
// assesses, so syncs can tell "updated" from "unchanged".
std::string compute_digest(const Activity& activity, const std::string& config_text) {
    std::string acc = config_text;
    for (const auto& [lang, desc] : activity.descriptions) {
        acc += "\x1f" + lang + "\x1f" + desc.body;
    }
    if (!activity.resources_dir.empty()) {
        std::vector<fs::path> files;
        std::error_code ec;
        for (const auto& entry : fs::recursive_directory_iterator(activity.resources_dir, ec)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
            acc += "\x1f" + f.filename().string() + "\x1f" + util::read_file(f).value_or("");
        }
    }
    return util::sha256_hex(acc);
}

void scan_dir(const fs::path& root, const fs::path& dir, const std::string& repo_id,
              std::vector<ActivityConfig> chain, ScanResult& out) {
    auto rel = fs::relative(dir, root).string();
    if (rel == ".") rel = "";

    if (auto dirconfig = util::read_file(dir / "dirconfig.json")) {
        std::string error;
        if (auto cfg = parse_activity_config(*dirconfig, ConfigParseMode::Strict, &error)) {
            chain.push_back(std::move(*cfg));
        } else {
            out.diagnostics.push_back({rel, "invalid dirconfig.json: " + error});
        }
    }

    auto config_text = util::read_file(dir / "config.json");
    if (config_text) {
        // config.json marks an activity leaf; nothing below it is scanned.
        std::string error;
        auto cfg = parse_activity_config(*config_text, ConfigParseMode::Strict, &error);
        if (!cfg) {
            out.diagnostics.push_back({rel, "invalid config.json: " + error});
            return;
        }
        chain.push_back(std::move(*cfg));

        Activity activity;
        activity.repo_id = repo_id;
        activity.rel_path = rel;
        activity.id = activity_id(repo_id, rel);
        activity.dir = dir;
        activity.merged_config = resolve_chain(chain);
        activity.labels = activity.merged_config.labels;
        if (activity.merged_config.kind == "reading") activity.kind = ActivityKind::Reading;
        if (activity.merged_config.access == "restricted") activity.access = Access::Restricted;
        std::error_code ec;
        if (fs::is_directory(dir / "evaluation", ec)) activity.resources_dir = dir / "evaluation";

        if (!load_descriptions(dir, activity)) {
            out.diagnostics.push_back({rel, "activity has no description"});
            return;
        }
        if (activity.kind == ActivityKind::Exercise && !activity.merged_config.judge) {
            out.diagnostics.push_back({rel, "exercise has no judge configured"});
            return;
        }
        activity.content_digest = compute_digest(activity, *config_text);
        out.activities.push_back(std::move(activity));
        return;
    }

    std::error_code ec;
    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (!entry.is_directory(ec)) continue;
        auto name = entry.path().filename().string();
        if (name == ".git" || name == "public" || name == "description" || name == "evaluation") continue;
        subdirs.push_back(entry.path());
    }
    std::sort(subdirs.begin(), subdirs.end());
    for (const auto& sub : subdirs) scan_dir(root, sub, repo_id, chain, out);
}

}  // namespace

ScanResult scan_repository(const fs::path& root, const std::string& repo_id) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw std::runtime_error("repository root missing: " + root.string());
    }
    ScanResult out;
    scan_dir(root, root, repo_id, {}, out);
    std::sort(out.activities.begin(), out.activities.end(),
              [](const Activity& a, const Activity& b) { return a.rel_path < b.rel_path; });
    return out;
}

const Description* select_description(const Activity& activity, const std::string& preferred) {
    if (activity.descriptions.empty()) return nullptr;
    if (auto it = activity.descriptions.find(preferred); it != activity.descriptions.end()) {
        return &it->second;
    }
    if (auto it = activity.descriptions.find("en"); it != activity.descriptions.end()) {
        return &it->second;
    }
    return &activity.descriptions.begin()->second;  // map: lexicographically first
}

}  // namespace forge::repo
