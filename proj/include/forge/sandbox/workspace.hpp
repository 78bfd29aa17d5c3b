#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "forge/sandbox/backend.hpp"

namespace forge::sandbox {

// Provisioned per assessment; removes the tree on destruction.
class Workspace {
  public:
    Workspace() = default;
    explicit Workspace(WorkspaceLayout layout) : layout_(std::move(layout)) {}
    Workspace(Workspace&& other) noexcept : layout_(std::move(other.layout_)) { other.layout_.root.clear(); }
    Workspace& operator=(Workspace&& other) noexcept;
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    ~Workspace();

    const WorkspaceLayout& layout() const { return layout_; }
    void release();  // keep the tree on disk (debugging)

  private:
    WorkspaceLayout layout_;
};

// Builds the four-root layout under a fresh directory in workspace_root:
// submission/source (the submitted bytes), judge/ and resources/ copied
// read-only, workdir/ writable and empty.
Workspace provision(const std::filesystem::path& workspace_root,
                    std::string_view submission,
                    const std::filesystem::path& judge_dir,
                    const std::filesystem::path& resources_dir);

}  // namespace forge::sandbox
