#include "forge/feedback/wire.hpp"

#include <json.hpp>

namespace forge::feedback {

using nlohmann::json;

namespace {

// "$" marks the document root; children drop that prefix so nested paths
// read "tabs[0]/contexts[0]/...".
std::string child_path(const std::string& parent, const char* field, std::size_t index) {
    std::string p = (parent.empty() || parent == "$") ? std::string() : parent + "/";
    p += field;
    p += "[" + std::to_string(index) + "]";
    return p;
}

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path, message);
}

void check_known_fields(const json& node, const std::string& path, ParseMode mode,
                        std::initializer_list<std::string_view> known) {
    if (mode != ParseMode::Strict) return;
    for (const auto& [key, value] : node.items()) {
        (void)value;
        bool ok = false;
        for (auto k : known)
            if (key == k) ok = true;
        if (!ok) fail(path, "unknown field \"" + key + "\"");
    }
}

std::optional<std::string> parse_description(const json& node, const std::string& path) {
    auto it = node.find("description");
    if (it == node.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) fail(path, "description must be a string");
    return it->get<std::string>();
}

std::vector<Message> parse_messages(const json& node, const std::string& path, ParseMode mode) {
    std::vector<Message> out;
    auto it = node.find("messages");
    if (it == node.end() || it->is_null()) return out;
    if (!it->is_array()) fail(path, "messages must be an array");
    std::size_t i = 0;
    for (const auto& m : *it) {
        std::string mpath = child_path(path, "messages", i++);
        if (!m.is_object()) fail(mpath, "message must be an object");
        check_known_fields(m, mpath, mode, {"format", "body", "visibility"});
        Message msg;
        auto fmt = m.find("format");
        if (fmt == m.end() || !fmt->is_string()) fail(mpath, "missing message format");
        auto parsed_fmt = format_from_name(fmt->get<std::string>());
        if (!parsed_fmt) fail(mpath, "unknown message format \"" + fmt->get<std::string>() + "\"");
        msg.format = *parsed_fmt;
        auto body = m.find("body");
        if (body == m.end() || !body->is_string()) fail(mpath, "missing message body");
        msg.body = body->get<std::string>();
        auto vis = m.find("visibility");
        if (vis == m.end() || vis->is_null()) {
            msg.visibility = Visibility::Student;
        } else {
            if (!vis->is_string()) fail(mpath, "visibility must be a string");
            std::string v = vis->get<std::string>();
            if (v == "student")
                msg.visibility = Visibility::Student;
            else if (v == "staff")
                msg.visibility = Visibility::Staff;
            else
                fail(mpath, "unknown visibility \"" + v + "\"");
        }
        out.push_back(std::move(msg));
    }
    return out;
}

Test parse_test(const json& node, const std::string& path, ParseMode mode) {
    if (!node.is_object()) fail(path, "test must be an object");
    check_known_fields(node, path, mode, {"description", "generated", "expected", "accepted", "messages"});
    Test t;
    t.description = parse_description(node, path);
    auto gen = node.find("generated");
    if (gen == node.end() || !gen->is_string()) fail(path, "missing generated result");
    t.generated = gen->get<std::string>();
    auto exp = node.find("expected");
    if (exp == node.end() || !exp->is_string()) fail(path, "missing expected result");
    t.expected = exp->get<std::string>();
    auto acc = node.find("accepted");
    if (acc == node.end() || !acc->is_boolean()) fail(path, "missing accepted flag");
    t.accepted = acc->get<bool>();
    t.messages = parse_messages(node, path, mode);
    return t;
}

template <typename Child>
std::vector<Child> parse_children(const json& node, const std::string& path, const char* field,
                                  ParseMode mode, Child (*parse_child)(const json&, const std::string&, ParseMode)) {
    auto it = node.find(field);
    if (it == node.end() || it->is_null()) return {};
    if (!it->is_array()) fail(path, std::string(field) + " must be an array");
    std::vector<Child> out;
    std::size_t i = 0;
    for (const auto& c : *it) out.push_back(parse_child(c, child_path(path, field, i++), mode));
    return out;
}

TestCase parse_testcase(const json& node, const std::string& path, ParseMode mode) {
    if (!node.is_object()) fail(path, "test case must be an object");
    check_known_fields(node, path, mode, {"description", "messages", "tests", "accepted"});
    TestCase tc;
    tc.description = parse_description(node, path);
    tc.messages = parse_messages(node, path, mode);
    tc.tests = parse_children<Test>(node, path, "tests", mode, parse_test);
    return tc;
}

Context parse_context(const json& node, const std::string& path, ParseMode mode) {
    if (!node.is_object()) fail(path, "context must be an object");
    check_known_fields(node, path, mode, {"description", "messages", "testcases", "accepted"});
    Context ctx;
    ctx.description = parse_description(node, path);
    ctx.messages = parse_messages(node, path, mode);
    ctx.testcases = parse_children<TestCase>(node, path, "testcases", mode, parse_testcase);
    return ctx;
}

Tab parse_tab(const json& node, const std::string& path, ParseMode mode) {
    if (!node.is_object()) fail(path, "tab must be an object");
    check_known_fields(node, path, mode, {"description", "messages", "contexts", "accepted"});
    Tab tab;
    tab.description = parse_description(node, path);
    tab.messages = parse_messages(node, path, mode);
    tab.contexts = parse_children<Context>(node, path, "contexts", mode, parse_context);
    return tab;
}

json messages_to_json(const std::vector<Message>& messages) {
    json arr = json::array();
    for (const auto& m : messages) {
        json o;
        o["format"] = format_name(m.format);
        o["body"] = m.body;
        o["visibility"] = m.visibility == Visibility::Staff ? "staff" : "student";
        arr.push_back(std::move(o));
    }
    return arr;
}

}  // namespace

FeedbackTree parse_feedback(std::string_view doc, ParseMode mode, std::vector<std::string>* warnings) {
    json root = json::parse(doc, nullptr, false);
    if (root.is_discarded()) fail("$", "malformed JSON");
    if (!root.is_object()) fail("$", "feedback document must be a JSON object");
    check_known_fields(root, "$", mode, {"status", "description", "messages", "tabs"});

    FeedbackTree tree;
    tree.description = parse_description(root, "$");
    tree.messages = parse_messages(root, "$", mode);
    tree.tabs = parse_children<Tab>(root, "$", "tabs", mode, parse_tab);
    derive_accepted(tree);

    auto status_it = root.find("status");
    if (status_it != root.end() && !status_it->is_null()) {
        if (!status_it->is_string()) fail("$", "status must be a string");
        auto s = status_from_name(status_it->get<std::string>());
        if (!s) fail("$", "unknown status value \"" + status_it->get<std::string>() + "\"");
        tree.status = *s;
    } else {
        // The judge supplied no verdict: aggregate per-test outcomes.
        std::vector<Status> implied;
        for (const auto& tab : tree.tabs)
            for (const auto& ctx : tab.contexts)
                for (const auto& tc : ctx.testcases)
                    for (const auto& t : tc.tests)
                        implied.push_back(t.accepted ? Status::Correct : Status::Wrong);
        tree.status = aggregate_status(implied);
        if (warnings) warnings->push_back("no top-level status supplied; aggregated from tests");
    }
    if (warnings && test_count(tree) == 0) warnings->push_back("feedback tree contains zero tests");
    return tree;
}

std::string canonical_serialize(const FeedbackTree& tree) {
    json root;
    root["status"] = std::string(status_name(tree.status));
    if (tree.description) root["description"] = *tree.description;
    root["messages"] = messages_to_json(tree.messages);
    json tabs = json::array();
    for (const auto& tab : tree.tabs) {
        json jt;
        if (tab.description) jt["description"] = *tab.description;
        jt["messages"] = messages_to_json(tab.messages);
        jt["accepted"] = tab.accepted;
        json contexts = json::array();
        for (const auto& ctx : tab.contexts) {
            json jc;
            if (ctx.description) jc["description"] = *ctx.description;
            jc["messages"] = messages_to_json(ctx.messages);
            jc["accepted"] = ctx.accepted;
            json testcases = json::array();
            for (const auto& tc : ctx.testcases) {
                json jtc;
                if (tc.description) jtc["description"] = *tc.description;
                jtc["messages"] = messages_to_json(tc.messages);
                jtc["accepted"] = tc.accepted;
                json tests = json::array();
                for (const auto& t : tc.tests) {
                    json jx;
                    if (t.description) jx["description"] = *t.description;
                    jx["generated"] = t.generated;
                    jx["expected"] = t.expected;
                    jx["accepted"] = t.accepted;
                    jx["messages"] = messages_to_json(t.messages);
                    tests.push_back(std::move(jx));
                }
                jtc["tests"] = std::move(tests);
                testcases.push_back(std::move(jtc));
            }
            jc["testcases"] = std::move(testcases);
            contexts.push_back(std::move(jc));
        }
        jt["contexts"] = std::move(contexts);
        tabs.push_back(std::move(jt));
    }
    root["tabs"] = std::move(tabs);
    // nlohmann::json objects keep keys sorted; compact dump is deterministic.
    return root.dump();
}

}  // namespace forge::feedback
