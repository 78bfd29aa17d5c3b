#include "forge/feedback/model.hpp"

#include <algorithm>

namespace forge::feedback {

int severity(Status s) {
    switch (s) {
        case Status::InternalError: return 7;
        case Status::CompilationError: return 6;
        case Status::RuntimeError: return 5;
        case Status::MemoryLimitExceeded: return 4;
        case Status::TimeLimitExceeded: return 3;
        case Status::OutputLimitExceeded: return 2;
        case Status::Wrong: return 1;
        case Status::Correct: return 0;
    }
    return 7;
}

std::string_view status_name(Status s) {
    switch (s) {
        case Status::InternalError: return "internal-error";
        case Status::CompilationError: return "compilation-error";
        case Status::RuntimeError: return "runtime-error";
        case Status::MemoryLimitExceeded: return "memory-limit-exceeded";
        case Status::TimeLimitExceeded: return "time-limit-exceeded";
        case Status::OutputLimitExceeded: return "output-limit-exceeded";
        case Status::Wrong: return "wrong";
        case Status::Correct: return "correct";
    }
    return "internal-error";
}

std::optional<Status> status_from_name(std::string_view name) {
    for (Status s : kAllStatuses)
        if (status_name(s) == name) return s;
    return std::nullopt;
}

Status aggregate_status(std::span<const Status> children) {
    Status worst = Status::Correct;
    for (Status s : children)
        if (severity(s) > severity(worst)) worst = s;
    return worst;
}

std::string_view format_name(MessageFormat f) {
    switch (f) {
        case MessageFormat::Plain: return "plain";
        case MessageFormat::Html: return "html";
        case MessageFormat::Markdown: return "markdown";
        case MessageFormat::Code: return "code";
    }
    return "plain";
}

std::optional<MessageFormat> format_from_name(std::string_view name) {
    if (name == "plain") return MessageFormat::Plain;
    if (name == "html") return MessageFormat::Html;
    if (name == "markdown") return MessageFormat::Markdown;
    if (name == "code") return MessageFormat::Code;
    return std::nullopt;
}

void derive_accepted(FeedbackTree& tree) {
    for (auto& tab : tree.tabs) {
        bool tab_ok = true;
        for (auto& ctx : tab.contexts) {
            bool ctx_ok = true;
            for (auto& tc : ctx.testcases) {
                bool tc_ok = std::all_of(tc.tests.begin(), tc.tests.end(),
                                         [](const Test& t) { return t.accepted; });
                tc.accepted = tc_ok;
                ctx_ok = ctx_ok && tc_ok;
            }
            ctx.accepted = ctx_ok;
            tab_ok = tab_ok && ctx_ok;
        }
        tab.accepted = tab_ok;
    }
}

int tab_badge(const Tab& tab) {
    int failed = 0;
    for (const auto& ctx : tab.contexts)
        for (const auto& tc : ctx.testcases)
            for (const auto& t : tc.tests)
                if (!t.accepted) ++failed;
    return failed;
}

int test_count(const FeedbackTree& tree) {
    int n = 0;
    for (const auto& tab : tree.tabs)
        for (const auto& ctx : tab.contexts)
            for (const auto& tc : ctx.testcases) n += static_cast<int>(tc.tests.size());
    return n;
}

namespace {

void strip(std::vector<Message>& messages) {
    std::erase_if(messages, [](const Message& m) { return m.visibility == Visibility::Staff; });
}

}  // namespace

FeedbackTree strip_staff_messages(FeedbackTree tree) {
    strip(tree.messages);
    for (auto& tab : tree.tabs) {
        strip(tab.messages);
        for (auto& ctx : tab.contexts) {
            strip(ctx.messages);
            for (auto& tc : ctx.testcases) {
                strip(tc.messages);
                for (auto& t : tc.tests) strip(t.messages);
            }
        }
    }
    return tree;
}

FeedbackTree engine_feedback(Status status, std::string description, std::vector<Message> messages) {
    FeedbackTree tree;
    tree.status = status;
    tree.description = std::move(description);
    tree.messages = std::move(messages);
    return tree;
}

}  // namespace forge::feedback
