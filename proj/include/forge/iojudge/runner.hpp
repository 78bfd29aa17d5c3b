#pragma once

#include <functional>

#include "forge/feedback/model.hpp"
#include "forge/iojudge/suite.hpp"
#include "forge/judge/protocol.hpp"
#include "forge/sandbox/process_runner.hpp"

namespace forge::iojudge {

// Injection point: production passes sandbox::run_process, tests script
// outcomes without spawning anything.
using CaseRunner = std::function<sandbox::ExecutionOutcome(const sandbox::RunRequest&)>;

// One fresh process per case, sequential, in spec order. Per-case wall
// budget is time_limit / case-count floored at 1 s so the suite as a
// whole respects the metadata limit.
feedback::FeedbackTree run_suite(const TestSuiteSpec& suite,
                                 const judge::JudgeMetadata& metadata,
                                 const CaseRunner& runner);

}  // namespace forge::iojudge
