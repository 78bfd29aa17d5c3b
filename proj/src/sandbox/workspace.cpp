#include "forge/sandbox/workspace.hpp"

#include <system_error>

#include "forge/util/fs.hpp"
#include "forge/util/hashing.hpp"

namespace forge::sandbox {

namespace fs = std::filesystem;

Workspace& Workspace::operator=(Workspace&& other) noexcept {
    if (this != &other) {
        if (!layout_.root.empty()) util::remove_tree(layout_.root);
        layout_ = std::move(other.layout_);
        other.layout_.root.clear();
    }
    return *this;
}

Workspace::~Workspace() {
    if (!layout_.root.empty()) util::remove_tree(layout_.root);
}

void Workspace::release() {
    layout_.root.clear();
}

Workspace provision(const fs::path& workspace_root,
                    std::string_view submission,
                    const fs::path& judge_dir,
                    const fs::path& resources_dir) {
    std::error_code ec;
    fs::create_directories(workspace_root, ec);

    WorkspaceLayout layout;
    layout.root = workspace_root / ("ws-" + util::random_hex(8));
    if (!fs::create_directory(layout.root, ec) || ec) {
        throw ProvisionError("cannot create workspace " + layout.root.string() + ": " + ec.message());
    }
    Workspace ws(layout);

    try {
        fs::create_directory(layout.submission_dir());
        fs::create_directory(layout.judge_dir());
        fs::create_directory(layout.resources_dir());
        fs::create_directory(layout.workdir());

        // These files get exec'd later; no fork may overlap the writes.
        auto guard = exec_write_guard();
        util::write_file(layout.submission_file(), submission);
        if (!fs::is_regular_file(layout.submission_file())) {
            throw ProvisionError("cannot write submission file");
        }
        if (!fs::is_directory(judge_dir)) {
            throw ProvisionError("judge directory missing: " + judge_dir.string());
        }
        util::copy_tree(judge_dir, layout.judge_dir());
        if (!resources_dir.empty() && fs::is_directory(resources_dir)) {
            util::copy_tree(resources_dir, layout.resources_dir());
        }

        // Judge and resources are read-only inside the sandbox; execute
        // bits survive so judge entry points stay runnable.
        fs::permissions(layout.root, fs::perms::owner_all | fs::perms::group_read | fs::perms::group_exec |
                                         fs::perms::others_read | fs::perms::others_exec);
        // Submissions stay directly runnable: the stock judge convention
        // executes the source file itself (scripts with shebangs).
        using std::filesystem::perms;
        util::set_tree_permissions(layout.submission_dir(), static_cast<perms>(0755),
                                   static_cast<perms>(0755), false);
        util::set_tree_permissions(layout.judge_dir(), static_cast<perms>(0555),
                                   static_cast<perms>(0444), true);
        util::set_tree_permissions(layout.resources_dir(), static_cast<perms>(0555),
                                   static_cast<perms>(0444), true);
        fs::permissions(layout.workdir(), fs::perms::all);
    } catch (const fs::filesystem_error& e) {
        throw ProvisionError(std::string("workspace copy failed: ") + e.what());
    }
    return ws;
}

}  // namespace forge::sandbox
