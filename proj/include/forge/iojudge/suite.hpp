#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge::iojudge {

enum class MatchMode { Exact, Trimmed, Tokens };

struct CaseSpec {
    std::string stdin_bytes;
    std::vector<std::string> args;
    std::string expected_stdout;
    MatchMode match = MatchMode::Exact;
    // When unset, any nonzero exit is treated as a crash.
    std::optional<int> expected_exit;
    std::optional<std::string> description;
};

struct ContextSpec {
    std::optional<std::string> description;
    std::vector<CaseSpec> cases;
};

struct TabSpec {
    std::string name;
    std::vector<ContextSpec> contexts;
};

struct TestSuiteSpec {
    // Each element may contain the placeholder {submission}; case args are
    // appended after the template.
    std::vector<std::string> run_command{"{submission}"};
    std::vector<TabSpec> tabs;

    std::size_t case_count() const;
};

// Returns nullopt and fills `error` on malformed input; a suite must
// contain at least one case.
std::optional<TestSuiteSpec> parse_suite(std::string_view text, std::string* error = nullptr);

bool compare(std::string_view generated, std::string_view expected, MatchMode mode);

}  // namespace forge::iojudge
