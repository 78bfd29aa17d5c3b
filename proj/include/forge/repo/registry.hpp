#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <vector>

#include "forge/judge/protocol.hpp"
#include "forge/repo/activity.hpp"

namespace forge::repo {

struct RepoConfig {
    std::string id;
    std::filesystem::path path;       // local working tree
    std::string remote_url;           // empty: tree is managed out of band
    std::string default_branch = "main";
    std::string secret;               // webhook HMAC key
};

class GitFetcher {
  public:
    virtual ~GitFetcher() = default;
    // Brings repo.path up to date with the remote default branch.
    // Throws std::runtime_error on failure.
    virtual void fetch(const RepoConfig& repo) = 0;
};

// Shells out to the git CLI; a no-op for repos without a remote_url.
std::unique_ptr<GitFetcher> make_cli_git_fetcher();
// Never touches disk; for tests and out-of-band-managed trees.
std::unique_ptr<GitFetcher> make_null_fetcher();

struct SyncReport {
    std::string repo_id;
    bool performed = false;  // false for non-default-branch webhooks
    std::vector<std::string> added;    // activity ids
    std::vector<std::string> updated;
    std::vector<std::string> removed;
    std::vector<ScanDiagnostic> diagnostics;

    bool empty_diff() const { return added.empty() && updated.empty() && removed.empty(); }
};

enum class WebhookStatus { Synced, IgnoredBranch, BadSignature, UnknownRepo, BadPayload };

struct WebhookResult {
    WebhookStatus status;
    SyncReport report;
};

// Published activity snapshot; readers get a consistent view while syncs
// swap whole-repo state atomically.
class ActivityRegistry {
  public:
    ActivityRegistry(std::vector<RepoConfig> repos,
                     std::filesystem::path judges_dir,
                     std::shared_ptr<GitFetcher> fetcher);

    // Full fetch + rescan of one repo. Serialized per repo.
    SyncReport sync(const std::string& repo_id);

    // Signature = hex HMAC-SHA256 of the raw payload, presented as
    // "sha256=<hex>". Payload: JSON with a git-style "ref".
    WebhookResult handle_webhook(const std::string& repo_id, const std::string& payload,
                                 const std::string& signature_header);

    std::shared_ptr<const Activity> find(const std::string& activity_id) const;
    std::vector<std::shared_ptr<const Activity>> list() const;

    std::optional<EffectiveConfig> effective_config(const Activity& activity, std::string* error = nullptr) const;
    const judge::JudgeBundle* find_judge(const std::string& name) const;
    const RepoConfig* find_repo(const std::string& repo_id) const;

  private:
    using Snapshot = std::map<std::string, std::shared_ptr<const Activity>>;

    std::vector<RepoConfig> repos_;
    std::filesystem::path judges_dir_;
    std::shared_ptr<GitFetcher> fetcher_;
    std::map<std::string, judge::JudgeBundle> judges_;

    mutable std::shared_mutex snapshot_mutex_;
    std::shared_ptr<const Snapshot> snapshot_;

    std::map<std::string, std::unique_ptr<std::mutex>> sync_locks_;
};

}  // namespace forge::repo
