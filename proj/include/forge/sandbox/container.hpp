#pragma once

#include <string>
#include <vector>

#include "forge/sandbox/execution.hpp"

namespace forge::sandbox {

// Full runtime CLI argv for one execution: `docker run --rm -i ...`.
// Pure function so flag construction is testable without a daemon.
std::vector<std::string> build_container_command(const ExecutionSpec& spec,
                                                 const std::string& runtime_binary = "docker");

}  // namespace forge::sandbox
