#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "forge/feedback/model.hpp"

namespace forge::feedback {

// Strict rejects unknown fields (built-in judge output); lenient ignores
// them (third-party judges).
enum class ParseMode { Strict, Lenient };

class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string path, std::string message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)),
          message_(std::move(message)) {}

    // Path of the first offending node, e.g. "tabs[0]/contexts[0]/testcases[0]/tests[0]";
    // "$" is the document root. Never empty.
    const std::string& path() const { return path_; }
    const std::string& message() const { return message_; }

private:
    std::string path_;
    std::string message_;
};

// Parses and validates one feedback wire document (UTF-8 JSON, schema in
// schemas/feedback.schema.json). Throws ValidationError on the first
// offending node. Accepted flags on groups are derived, never read from
// the document. A document without a top-level status gets the aggregate
// of its tests and a warning; a document with zero tests is flagged too.
FeedbackTree parse_feedback(std::string_view doc, ParseMode mode = ParseMode::Strict,
                            std::vector<std::string>* warnings = nullptr);

// Deterministic byte serialization; parse_feedback(canonical_serialize(t))
// is structurally equal to t, and serializing again is byte-identical.
std::string canonical_serialize(const FeedbackTree& tree);

}  // namespace forge::feedback
