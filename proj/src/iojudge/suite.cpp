#include "forge/iojudge/suite.hpp"

#include <json.hpp>

namespace forge::iojudge {

using nlohmann::json;

std::size_t TestSuiteSpec::case_count() const {
    std::size_t n = 0;
    for (const auto& tab : tabs)
        for (const auto& ctx : tab.contexts) n += ctx.cases.size();
    return n;
}

namespace {

std::optional<MatchMode> match_from_name(const std::string& name) {
    if (name == "exact") return MatchMode::Exact;
    if (name == "trimmed") return MatchMode::Trimmed;
    if (name == "tokens") return MatchMode::Tokens;
    return std::nullopt;
}

}  // namespace

std::optional<TestSuiteSpec> parse_suite(std::string_view text, std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return fail("suite is not a JSON object");

    TestSuiteSpec suite;
    try {
        if (doc.contains("run_command")) {
            suite.run_command = doc["run_command"].get<std::vector<std::string>>();
            if (suite.run_command.empty()) return fail("run_command must be non-empty");
        }
        if (!doc.contains("tabs") || !doc["tabs"].is_array()) return fail("suite needs a tabs array");
        for (const auto& jt : doc["tabs"]) {
            TabSpec tab;
            tab.name = jt.value("name", std::string("Feedback"));
            if (!jt.contains("contexts") || !jt["contexts"].is_array()) {
                return fail("tab \"" + tab.name + "\" needs a contexts array");
            }
            for (const auto& jc : jt["contexts"]) {
                ContextSpec ctx;
                if (jc.contains("description")) ctx.description = jc["description"].get<std::string>();
                if (!jc.contains("cases") || !jc["cases"].is_array()) {
                    return fail("context needs a cases array");
                }
                for (const auto& jcase : jc["cases"]) {
                    CaseSpec c;
                    c.stdin_bytes = jcase.value("stdin", std::string());
                    if (jcase.contains("args")) c.args = jcase["args"].get<std::vector<std::string>>();
                    if (!jcase.contains("expected_stdout")) return fail("case needs expected_stdout");
                    c.expected_stdout = jcase["expected_stdout"].get<std::string>();
                    auto mode = match_from_name(jcase.value("match", std::string("exact")));
                    if (!mode) return fail("unknown match mode in case");
                    c.match = *mode;
                    if (jcase.contains("expected_exit")) c.expected_exit = jcase["expected_exit"].get<int>();
                    if (jcase.contains("description")) c.description = jcase["description"].get<std::string>();
                    ctx.cases.push_back(std::move(c));
                }
                tab.contexts.push_back(std::move(ctx));
            }
            suite.tabs.push_back(std::move(tab));
        }
    } catch (const json::exception& e) {
        return fail(e.what());
    }
    if (suite.case_count() == 0) return fail("suite contains no cases");
    return suite;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> tokens(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

}  // namespace

bool compare(std::string_view generated, std::string_view expected, MatchMode mode) {
    switch (mode) {
        case MatchMode::Exact:
            return generated == expected;
        case MatchMode::Trimmed:
            return trim(generated) == trim(expected);
        case MatchMode::Tokens:
            return tokens(generated) == tokens(expected);
    }
    return false;
}

}  // namespace forge::iojudge
