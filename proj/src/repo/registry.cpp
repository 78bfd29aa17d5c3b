#include "forge/repo/registry.hpp"

#include <json.hpp>

#include "forge/sandbox/process_runner.hpp"
#include "forge/util/hashing.hpp"

namespace forge::repo {

using nlohmann::json;

namespace {

class CliGitFetcher final : public GitFetcher {
  public:
    void fetch(const RepoConfig& repo) override {
        if (repo.remote_url.empty()) return;
        std::string cmd;
        if (std::filesystem::is_directory(repo.path / ".git")) {
            cmd = "git -C '" + repo.path.string() + "' fetch --quiet origin && git -C '" +
                  repo.path.string() + "' reset --quiet --hard origin/" + repo.default_branch;
        } else {
            cmd = "git clone --quiet --branch " + repo.default_branch + " '" + repo.remote_url + "' '" +
                  repo.path.string() + "'";
        }
        // run_process forks under the exec-write guard, so a concurrent
        // workspace provision cannot leak a write fd into the git child.
        sandbox::RunRequest request;
        request.argv = {"sh", "-c", cmd};
        request.time_limit = 600.0;
        auto outcome = sandbox::run_process(request);
        if (!outcome.ok()) {
            throw std::runtime_error("git fetch failed for repository " + repo.id);
        }
    }
};

class NullFetcher final : public GitFetcher {
  public:
    void fetch(const RepoConfig&) override {}
};

}  // namespace

std::unique_ptr<GitFetcher> make_cli_git_fetcher() {
    return std::make_unique<CliGitFetcher>();
}

std::unique_ptr<GitFetcher> make_null_fetcher() {
    return std::make_unique<NullFetcher>();
}

ActivityRegistry::ActivityRegistry(std::vector<RepoConfig> repos,
                                   std::filesystem::path judges_dir,
                                   std::shared_ptr<GitFetcher> fetcher)
    : repos_(std::move(repos)),
      judges_dir_(std::move(judges_dir)),
      fetcher_(std::move(fetcher)),
      snapshot_(std::make_shared<const Snapshot>()) {
    for (const auto& repo : repos_) {
        sync_locks_.emplace(repo.id, std::make_unique<std::mutex>());
    }
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(judges_dir_, ec)) {
        if (!entry.is_directory()) continue;
        if (auto bundle = judge::load_judge_bundle(entry.path())) {
            judges_.emplace(bundle->name, std::move(*bundle));
        }
    }
}

const judge::JudgeBundle* ActivityRegistry::find_judge(const std::string& name) const {
    auto it = judges_.find(name);
    return it == judges_.end() ? nullptr : &it->second;
}

const RepoConfig* ActivityRegistry::find_repo(const std::string& repo_id) const {
    for (const auto& repo : repos_) {
        if (repo.id == repo_id) return &repo;
    }
    return nullptr;
}

SyncReport ActivityRegistry::sync(const std::string& repo_id) {
    SyncReport report;
    report.repo_id = repo_id;
    const RepoConfig* repo = find_repo(repo_id);
    if (!repo) {
        report.diagnostics.push_back({"", "unknown repository " + repo_id});
        return report;
    }

    std::lock_guard<std::mutex> sync_guard(*sync_locks_.at(repo_id));
    fetcher_->fetch(*repo);
    auto scan = scan_repository(repo->path, repo_id);
    report.diagnostics = std::move(scan.diagnostics);
    report.performed = true;

    std::unique_lock<std::shared_mutex> lock(snapshot_mutex_);
    auto next = std::make_shared<Snapshot>();
    for (const auto& [id, activity] : *snapshot_) {
        if (activity->repo_id != repo_id) next->emplace(id, activity);
    }
    std::map<std::string, std::shared_ptr<const Activity>> previous;
    for (const auto& [id, activity] : *snapshot_) {
        if (activity->repo_id == repo_id) previous.emplace(id, activity);
    }
    for (auto& activity : scan.activities) {
        auto ptr = std::make_shared<const Activity>(std::move(activity));
        auto prev = previous.find(ptr->id);
        if (prev == previous.end()) {
            report.added.push_back(ptr->id);
        } else if (prev->second->content_digest != ptr->content_digest) {
            report.updated.push_back(ptr->id);
        }
        next->emplace(ptr->id, std::move(ptr));
    }
    for (const auto& [id, activity] : previous) {
        if (!next->count(id)) report.removed.push_back(id);
    }
    snapshot_ = std::move(next);
    return report;
}

WebhookResult ActivityRegistry::handle_webhook(const std::string& repo_id, const std::string& payload,
                                               const std::string& signature_header) {
    WebhookResult result;
    result.report.repo_id = repo_id;

    const RepoConfig* repo = find_repo(repo_id);
    if (!repo) {
        result.status = WebhookStatus::UnknownRepo;
        return result;
    }
    std::string expected = "sha256=" + util::hmac_sha256_hex(repo->secret, payload);
    if (!util::constant_time_equal(expected, signature_header)) {
        result.status = WebhookStatus::BadSignature;
        return result;
    }

    json doc = json::parse(payload, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("ref") || !doc["ref"].is_string()) {
        result.status = WebhookStatus::BadPayload;
        return result;
    }
    std::string ref = doc["ref"].get<std::string>();
    std::string branch = ref.rfind("refs/heads/", 0) == 0 ? ref.substr(11) : ref;
    if (branch != repo->default_branch) {
        result.status = WebhookStatus::IgnoredBranch;
        return result;
    }

    result.report = sync(repo_id);
    result.status = WebhookStatus::Synced;
    return result;
}

std::shared_ptr<const Activity> ActivityRegistry::find(const std::string& activity_id) const {
    std::shared_lock<std::shared_mutex> lock(snapshot_mutex_);
    auto it = snapshot_->find(activity_id);
    return it == snapshot_->end() ? nullptr : it->second;
}

std::vector<std::shared_ptr<const Activity>> ActivityRegistry::list() const {
    std::shared_lock<std::shared_mutex> lock(snapshot_mutex_);
    std::vector<std::shared_ptr<const Activity>> out;
    out.reserve(snapshot_->size());
    for (const auto& [id, activity] : *snapshot_) out.push_back(activity);
    return out;
}

std::optional<EffectiveConfig> ActivityRegistry::effective_config(const Activity& activity,
                                                                  std::string* error) const {
    return resolve_config(
        activity.merged_config,
        [this](const std::string& name) -> std::optional<std::string> {
            const auto* bundle = find_judge(name);
            if (!bundle) return std::nullopt;
            return bundle->default_image;
        },
        error);
}

}  // namespace forge::repo
