#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "forge/sandbox/execution.hpp"

namespace forge::sandbox {

// Transient infrastructure failure: the work item should be retried.
struct BackendUnavailable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Permanent provisioning failure for this assessment (unknown image,
// copy failure); surfaces as internal-error upstream.
struct ProvisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed workspace layout shared by all backends.
struct WorkspaceLayout {
    std::filesystem::path root;

    std::filesystem::path submission_dir() const { return root / "submission"; }
    std::filesystem::path submission_file() const { return root / "submission" / "source"; }
    std::filesystem::path judge_dir() const { return root / "judge"; }
    std::filesystem::path resources_dir() const { return root / "resources"; }
    std::filesystem::path workdir() const { return root / "workdir"; }
};

class Backend {
  public:
    virtual ~Backend() = default;
    virtual std::string name() const = 0;
    virtual ExecutionOutcome execute(const ExecutionSpec& spec) = 0;
};

std::unique_ptr<Backend> make_host_process_backend();
std::unique_ptr<Backend> make_container_backend(std::string runtime_binary = "docker");

}  // namespace forge::sandbox
