#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "forge/sandbox/execution.hpp"

namespace forge::sandbox {

// Low-level subprocess launch with limit supervision. Used by the
// host-process backend and by judge binaries that spawn submissions.
struct RunRequest {
    std::vector<std::string> argv;
    std::string stdin_bytes;
    std::filesystem::path workdir;  // empty: inherit caller's cwd
    double time_limit = 30.0;       // seconds; SIGTERM at limit, SIGKILL 2 s later
    std::int64_t output_limit = 10 * 1024 * 1024;  // per stream
    std::int64_t memory_limit = 0;  // bytes; 0 disables the polled check
    bool drop_privileges = false;   // become nobody when running as root
};

// Blocks until exit or forcible termination. Throws BackendUnavailable
// when the process cannot be started at all (fork/pipe exhaustion).
ExecutionOutcome run_process(const RunRequest& req);

}  // namespace forge::sandbox
