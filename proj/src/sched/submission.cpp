#include "forge/sched/submission.hpp"

namespace forge::sched {

const char* lifecycle_name(Lifecycle lc) {
    switch (lc) {
        case Lifecycle::Queued: return "queued";
        case Lifecycle::Running: return "running";
        case Lifecycle::Assessed: return "assessed";
    }
    return "queued";
}

std::optional<Lifecycle> lifecycle_from_name(std::string_view name) {
    if (name == "queued") return Lifecycle::Queued;
    if (name == "running") return Lifecycle::Running;
    if (name == "assessed") return Lifecycle::Assessed;
    return std::nullopt;
}

}  // namespace forge::sched
