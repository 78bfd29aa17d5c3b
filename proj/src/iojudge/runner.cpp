#include "forge/iojudge/runner.hpp"

#include <algorithm>

#include "forge/diff/diff.hpp"
#include "forge/diff/layout.hpp"

namespace forge::iojudge {

using feedback::Message;
using feedback::MessageFormat;
using feedback::Status;
using feedback::Visibility;

namespace {

std::vector<std::string> build_argv(const TestSuiteSpec& suite,
                                    const judge::JudgeMetadata& metadata,
                                    const CaseSpec& c) {
    std::vector<std::string> argv;
    for (auto part : suite.run_command) {
        std::size_t pos;
        while ((pos = part.find("{submission}")) != std::string::npos) {
            part.replace(pos, 12, metadata.submission_path.string());
        }
        argv.push_back(std::move(part));
    }
    argv.insert(argv.end(), c.args.begin(), c.args.end());
    return argv;
}

Message student_code(std::string body) {
    return {MessageFormat::Code, std::move(body), Visibility::Student};
}

Message student_plain(std::string body) {
    return {MessageFormat::Plain, std::move(body), Visibility::Student};
}

}  // namespace

feedback::FeedbackTree run_suite(const TestSuiteSpec& suite,
                                 const judge::JudgeMetadata& metadata,
                                 const CaseRunner& runner) {
    feedback::FeedbackTree tree;
    std::vector<Status> case_statuses;

    const double per_case_budget =
        std::max(1.0, static_cast<double>(metadata.time_limit) / static_cast<double>(suite.case_count()));

    for (const auto& tab_spec : suite.tabs) {
        feedback::Tab tab;
        tab.description = tab_spec.name;
        for (const auto& ctx_spec : tab_spec.contexts) {
            feedback::Context ctx;
            ctx.description = ctx_spec.description;
            for (const auto& case_spec : ctx_spec.cases) {
                sandbox::RunRequest req;
                req.argv = build_argv(suite, metadata, case_spec);
                req.stdin_bytes = case_spec.stdin_bytes;
                req.workdir = metadata.workdir_path;
                req.time_limit = per_case_budget;
                req.memory_limit = metadata.memory_limit;
                req.output_limit = metadata.output_limit;

                auto outcome = runner(req);

                feedback::TestCase tc;
                feedback::Test test;
                test.description = case_spec.description;
                test.generated = outcome.stdout_bytes;
                test.expected = case_spec.expected_stdout;

                Status status = Status::Correct;
                if (outcome.violations.count(sandbox::Violation::Memory)) {
                    status = Status::MemoryLimitExceeded;
                    test.messages.push_back(student_plain("the program exceeded the memory limit"));
                } else if (outcome.violations.count(sandbox::Violation::Timeout)) {
                    status = Status::TimeLimitExceeded;
                    test.messages.push_back(student_plain("the program exceeded the time limit for this test"));
                } else if (outcome.violations.count(sandbox::Violation::Output)) {
                    status = Status::OutputLimitExceeded;
                    test.messages.push_back(student_plain("the program produced too much output"));
                } else if (!outcome.exit_code) {
                    status = Status::RuntimeError;
                    test.messages.push_back(student_plain("the program was terminated"));
                } else if (case_spec.expected_exit && *outcome.exit_code != *case_spec.expected_exit) {
                    status = Status::Wrong;
                    test.messages.push_back(student_plain(
                        "expected exit code " + std::to_string(*case_spec.expected_exit) + ", got " +
                        std::to_string(*outcome.exit_code)));
                } else if (!case_spec.expected_exit && *outcome.exit_code != 0) {
                    status = Status::RuntimeError;
                    test.messages.push_back(student_plain("the program exited with code " +
                                                          std::to_string(*outcome.exit_code)));
                } else if (!compare(outcome.stdout_bytes, case_spec.expected_stdout, case_spec.match)) {
                    status = Status::Wrong;
                    auto gen_lines = diff::split_lines(outcome.stdout_bytes);
                    auto exp_lines = diff::split_lines(case_spec.expected_stdout);
                    auto script = diff::line_diff(gen_lines, exp_lines);
                    auto rows = diff::layout(script, diff::LayoutMode::Interleaved);
                    test.messages.push_back(student_code(diff::render_text(rows)));
                }

                test.accepted = status == Status::Correct;
                if (!test.accepted && !outcome.stderr_bytes.empty()) {
                    test.messages.push_back(student_code("standard error:\n" + outcome.stderr_bytes));
                }
                case_statuses.push_back(status);
                tc.tests.push_back(std::move(test));
                ctx.testcases.push_back(std::move(tc));
            }
            tab.contexts.push_back(std::move(ctx));
        }
        tree.tabs.push_back(std::move(tab));
    }

    tree.status = feedback::aggregate_status(case_statuses);
    feedback::derive_accepted(tree);
    return tree;
}

}  // namespace forge::iojudge
