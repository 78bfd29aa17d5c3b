#include "forge/judge/protocol.hpp"

#include <json.hpp>

#include "forge/feedback/wire.hpp"
#include "forge/util/fs.hpp"

namespace forge::judge {

using nlohmann::json;

std::string serialize_metadata(const JudgeMetadata& m) {
    json doc{
        {"submission_path", m.submission_path.string()},
        {"resources_path", m.resources_path.string()},
        {"judge_path", m.judge_path.string()},
        {"workdir_path", m.workdir_path.string()},
        {"programming_language", m.programming_language},
        {"natural_language", m.natural_language},
        {"time_limit", m.time_limit},
        {"memory_limit", m.memory_limit},
        {"output_limit", m.output_limit},
    };
    return doc.dump();
}

std::optional<JudgeMetadata> parse_metadata(const std::string& text, std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return fail("metadata is not a JSON object");
    JudgeMetadata m;
    try {
        m.submission_path = doc.at("submission_path").get<std::string>();
        if (doc.contains("resources_path")) m.resources_path = doc["resources_path"].get<std::string>();
        if (doc.contains("judge_path")) m.judge_path = doc["judge_path"].get<std::string>();
        if (doc.contains("workdir_path")) m.workdir_path = doc["workdir_path"].get<std::string>();
        if (doc.contains("programming_language"))
            m.programming_language = doc["programming_language"].get<std::string>();
        if (doc.contains("natural_language")) m.natural_language = doc["natural_language"].get<std::string>();
        if (doc.contains("time_limit")) m.time_limit = doc["time_limit"].get<std::int64_t>();
        if (doc.contains("memory_limit")) m.memory_limit = doc["memory_limit"].get<std::int64_t>();
        if (doc.contains("output_limit")) m.output_limit = doc["output_limit"].get<std::int64_t>();
    } catch (const json::exception& e) {
        return fail(e.what());
    }
    if (m.time_limit <= 0 || m.memory_limit <= 0 || m.output_limit <= 0) {
        return fail("limits must be strictly positive");
    }
    return m;
}

std::optional<JudgeBundle> load_judge_bundle(const std::filesystem::path& dir, std::string* error) {
    auto fail = [&](const std::string& why) {
        if (error) *error = why;
        return std::nullopt;
    };
    JudgeBundle bundle;
    bundle.root_path = dir;
    bundle.name = dir.filename().string();

    if (auto manifest = util::read_file(dir / "judge.json")) {
        json doc = json::parse(*manifest, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) return fail("judge.json is not a JSON object");
        if (doc.contains("name")) bundle.name = doc["name"].get<std::string>();
        if (doc.contains("entry")) bundle.entry = doc["entry"].get<std::string>();
        if (doc.contains("default_image")) bundle.default_image = doc["default_image"].get<std::string>();
    }

    std::error_code ec;
    auto entry = bundle.entry_path();
    auto st = std::filesystem::status(entry, ec);
    if (ec || !std::filesystem::is_regular_file(st)) {
        return fail("judge entry point missing: " + entry.string());
    }
    if ((st.permissions() & (std::filesystem::perms::owner_exec | std::filesystem::perms::group_exec |
                             std::filesystem::perms::others_exec)) == std::filesystem::perms::none) {
        return fail("judge entry point not executable: " + entry.string());
    }
    return bundle;
}

JudgeMetadata build_judge_metadata(const sandbox::WorkspaceLayout& layout,
                                   const std::string& programming_language,
                                   const std::string& natural_language,
                                   std::optional<std::int64_t> time_limit,
                                   std::optional<std::int64_t> memory_limit,
                                   std::optional<std::int64_t> output_limit) {
    JudgeMetadata m;
    m.submission_path = layout.submission_file();
    m.resources_path = layout.resources_dir();
    m.judge_path = layout.judge_dir();
    m.workdir_path = layout.workdir();
    m.programming_language = programming_language;
    if (!natural_language.empty()) m.natural_language = natural_language;
    m.time_limit = time_limit.value_or(kDefaultTimeLimitS);
    m.memory_limit = memory_limit.value_or(kDefaultMemoryLimitBytes);
    m.output_limit = output_limit.value_or(kDefaultOutputLimitBytes);
    return m;
}

namespace {

std::string clip(const std::string& bytes, std::size_t cap = 65536) {
    if (bytes.size() <= cap) return bytes;
    return bytes.substr(0, cap) + "\n... (" + std::to_string(bytes.size()) + " bytes total)";
}

feedback::Message staff_message(std::string body) {
    return {feedback::MessageFormat::Plain, std::move(body), feedback::Visibility::Staff};
}

}  // namespace

feedback::FeedbackTree invoke_judge(const JudgeBundle& bundle,
                                    const JudgeMetadata& metadata,
                                    sandbox::Backend& backend,
                                    const InvokeOptions& options) {
    sandbox::ExecutionSpec spec;
    spec.image = bundle.default_image;
    spec.command = {(metadata.judge_path / bundle.entry).string()};
    spec.stdin_bytes = serialize_metadata(metadata);
    spec.workdir = metadata.workdir_path;
    spec.mounts = options.mounts;
    spec.network_allowed = options.network_allowed;
    // Hard cap on the whole run; per-test budgeting is the judge's job.
    spec.time_limit = static_cast<double>(metadata.time_limit) * 2 + 30;
    spec.memory_limit = metadata.memory_limit;
    spec.output_limit = metadata.output_limit;

    auto outcome = backend.execute(spec);

    std::vector<feedback::Message> notes;
    if (!outcome.stderr_bytes.empty()) {
        notes.push_back(staff_message("judge stderr:\n" + clip(outcome.stderr_bytes)));
    }

    using feedback::Status;
    if (outcome.violations.count(sandbox::Violation::Memory)) {
        return feedback::engine_feedback(Status::MemoryLimitExceeded,
                                         "assessment exceeded the memory limit", std::move(notes));
    }
    if (outcome.violations.count(sandbox::Violation::Timeout)) {
        return feedback::engine_feedback(Status::TimeLimitExceeded,
                                         "assessment did not finish in time", std::move(notes));
    }
    if (outcome.violations.count(sandbox::Violation::Output)) {
        return feedback::engine_feedback(Status::OutputLimitExceeded,
                                         "assessment produced too much output", std::move(notes));
    }

    try {
        auto tree = feedback::parse_feedback(outcome.stdout_bytes, feedback::ParseMode::Lenient);
        if (outcome.exit_code && *outcome.exit_code != 0) {
            notes.push_back(staff_message("judge exited with code " + std::to_string(*outcome.exit_code) +
                                          " but produced valid feedback"));
        }
        for (auto& note : notes) tree.messages.push_back(std::move(note));
        return tree;
    } catch (const feedback::ValidationError& e) {
        notes.push_back(staff_message(std::string("feedback rejected: ") + e.what()));
    }

    std::string detail = "judge ";
    if (outcome.exit_code) {
        detail += "exited with code " + std::to_string(*outcome.exit_code);
    } else {
        detail += "was terminated";
    }
    detail += " without valid feedback\nstdout:\n" + clip(outcome.stdout_bytes);
    notes.push_back(staff_message(std::move(detail)));
    return feedback::engine_feedback(Status::InternalError, "the assessment failed due to an internal error",
                                     std::move(notes));
}

}  // namespace forge::judge
