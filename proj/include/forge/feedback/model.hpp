#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forge::feedback {

// Overall submission verdict. Ordered by severity, most severe first;
// internal-error is the engine's own failure state, the rest describe
// outcomes of the submitted code.
enum class Status {
    InternalError,
    CompilationError,
    RuntimeError,
    MemoryLimitExceeded,
    TimeLimitExceeded,
    OutputLimitExceeded,
    Wrong,
    Correct,
};

inline constexpr Status kAllStatuses[] = {
    Status::InternalError,       Status::CompilationError,    Status::RuntimeError,
    Status::MemoryLimitExceeded, Status::TimeLimitExceeded,   Status::OutputLimitExceeded,
    Status::Wrong,               Status::Correct,
};

// Higher value = more severe.
int severity(Status s);

std::string_view status_name(Status s);
std::optional<Status> status_from_name(std::string_view name);

// Maximum severity over the list; empty aggregates to correct.
Status aggregate_status(std::span<const Status> children);

enum class MessageFormat { Plain, Html, Markdown, Code };
enum class Visibility { Student, Staff };

std::string_view format_name(MessageFormat f);
std::optional<MessageFormat> format_from_name(std::string_view name);

struct Message {
    MessageFormat format = MessageFormat::Plain;
    std::string body;
    Visibility visibility = Visibility::Student;

    bool operator==(const Message&) const = default;
};

struct Test {
    std::optional<std::string> description;
    std::string generated;
    std::string expected;
    bool accepted = false;
    std::vector<Message> messages;

    bool operator==(const Test&) const = default;
};

struct TestCase {
    std::optional<std::string> description;
    std::vector<Message> messages;
    std::vector<Test> tests;
    bool accepted = false;  // derived: all tests accepted

    bool operator==(const TestCase&) const = default;
};

struct Context {
    std::optional<std::string> description;
    std::vector<Message> messages;
    std::vector<TestCase> testcases;
    bool accepted = false;

    bool operator==(const Context&) const = default;
};

struct Tab {
    std::optional<std::string> description;
    std::vector<Message> messages;
    std::vector<Context> contexts;
    bool accepted = false;

    bool operator==(const Tab&) const = default;
};

struct FeedbackTree {
    Status status = Status::Correct;
    std::optional<std::string> description;
    std::vector<Message> messages;
    std::vector<Tab> tabs;

    bool operator==(const FeedbackTree&) const = default;
};

// Recomputes every accepted flag bottom-up from the tests.
void derive_accepted(FeedbackTree& tree);

// Count of descendant tests with accepted == false (the tab header badge).
int tab_badge(const Tab& tab);

int test_count(const FeedbackTree& tree);

// Removes staff-visible messages at every level; used before handing
// feedback to non-admin API clients.
[[nodiscard]] FeedbackTree strip_staff_messages(FeedbackTree tree);

// Convenience constructor for engine-generated verdicts (violations,
// judge malfunctions): a tree with no tabs and one or two messages.
FeedbackTree engine_feedback(Status status, std::string description, std::vector<Message> messages);

}  // namespace forge::feedback
