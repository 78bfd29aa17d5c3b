#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace forge::sandbox {

// Hold while writing files that will later be exec'd (workspace
// provisioning). A concurrent fork snapshots the open write fd, which
// survives exec in the child and fails later execs of the same file
// with ETXTBSY; run_process takes this lock around fork().
std::unique_lock<std::mutex> exec_write_guard();

enum class Violation { Timeout, Memory, Output };

struct Mount {
    std::filesystem::path host_path;
    std::filesystem::path sandbox_path;
    bool read_only = true;

    bool operator==(const Mount&) const = default;
};

struct ExecutionSpec {
    // Image reference, or "host-process" for the subprocess backend.
    std::string image = "host-process";
    std::vector<std::string> command;
    std::string stdin_bytes;
    std::filesystem::path workdir;
    std::vector<Mount> mounts;
    double time_limit = 30.0;          // seconds
    std::int64_t memory_limit = 256 * 1024 * 1024;
    std::int64_t output_limit = 10 * 1024 * 1024;  // per stream, bytes
    bool network_allowed = false;
};

struct ExecutionOutcome {
    // Unset when the engine killed the process. A process that dies from
    // its own signal reports 128 + signo.
    std::optional<int> exit_code;
    std::string stdout_bytes;
    std::string stderr_bytes;
    double wall_time = 0.0;   // seconds
    double cpu_time = 0.0;    // informational, not enforced
    std::optional<std::int64_t> max_memory;  // bytes, unknown on some backends
    std::set<Violation> violations;

    bool killed() const { return !exit_code.has_value(); }
    bool ok() const { return exit_code && *exit_code == 0 && violations.empty(); }
};

// spec.command non-empty, limits strictly positive, mounts non-overlapping.
bool validate_spec(const ExecutionSpec& spec, std::string* reason = nullptr);

}  // namespace forge::sandbox
