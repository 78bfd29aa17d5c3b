#include <iostream>
#include <sstream>

#include "forge/feedback/model.hpp"
#include "forge/feedback/wire.hpp"
#include "forge/iojudge/runner.hpp"
#include "forge/iojudge/suite.hpp"
#include "forge/judge/protocol.hpp"
#include "forge/sandbox/process_runner.hpp"
#include "forge/util/fs.hpp"

// Generic input/output judge. Reads the metadata document on stdin,
// the suite from <resources>/suite.json, and writes feedback to stdout.
// Any failure of its own still produces a valid feedback document.

namespace {

int emit(const forge::feedback::FeedbackTree& tree) {
    std::cout << forge::feedback::canonical_serialize(tree) << std::endl;
    return 0;
}

int emit_internal_error(const std::string& detail) {
    auto tree = forge::feedback::engine_feedback(
        forge::feedback::Status::InternalError, "the assessment failed due to an internal error",
        {{forge::feedback::MessageFormat::Plain, detail, forge::feedback::Visibility::Staff}});
    return emit(tree);
}

}  // namespace

int main() {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();

    std::string error;
    auto metadata = forge::judge::parse_metadata(buffer.str(), &error);
    if (!metadata) {
        return emit_internal_error("judge could not parse metadata: " + error);
    }

    auto suite_path = metadata->resources_path / "suite.json";
    auto suite_text = forge::util::read_file(suite_path);
    if (!suite_text) {
        return emit_internal_error("judge could not read " + suite_path.string());
    }
    auto suite = forge::iojudge::parse_suite(*suite_text, &error);
    if (!suite) {
        return emit_internal_error("invalid test suite at " + suite_path.string() + ": " + error);
    }

    auto tree = forge::iojudge::run_suite(*suite, *metadata, forge::sandbox::run_process);
    return emit(tree);
}
