#include "forge/sandbox/execution.hpp"

namespace forge::sandbox {

bool validate_spec(const ExecutionSpec& spec, std::string* reason) {
    auto fail = [&](const char* why) {
        if (reason) *reason = why;
        return false;
    };
    if (spec.command.empty()) return fail("command must be non-empty");
    if (spec.time_limit <= 0) return fail("time_limit must be positive");
    if (spec.memory_limit <= 0) return fail("memory_limit must be positive");
    if (spec.output_limit <= 0) return fail("output_limit must be positive");
    for (std::size_t i = 0; i < spec.mounts.size(); ++i) {
        auto a = spec.mounts[i].sandbox_path.lexically_normal();
        for (std::size_t j = i + 1; j < spec.mounts.size(); ++j) {
            auto b = spec.mounts[j].sandbox_path.lexically_normal();
            auto rel_ab = a.lexically_relative(b).string();
            auto rel_ba = b.lexically_relative(a).string();
            auto nested = [](const std::string& rel) {
                return !rel.empty() && rel != ".." && rel.compare(0, 3, "../") != 0;
            };
            if (a == b || nested(rel_ab) || nested(rel_ba)) return fail("mounts overlap");
        }
    }
    return true;
}

}  // namespace forge::sandbox
