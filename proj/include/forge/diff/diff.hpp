#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forge::diff {

enum class EditKind { Keep, Delete, Insert };

// One line-level (or character-level) edit. Applying the deletes and
// inserts to the generated sequence yields the expected sequence.
struct EditOp {
    EditKind kind;
    std::string text;

    bool operator==(const EditOp&) const = default;
};

using EditScript = std::vector<EditOp>;

// Shortest edit script (Myers O(ND)): delete+insert count is minimal.
EditScript line_diff(std::span<const std::string> generated, std::span<const std::string> expected);

// Same algorithm over bytes; ops carry single-byte texts. Used as the
// second pass that highlights changes inside paired changed lines.
EditScript char_diff(std::string_view generated, std::string_view expected);

// Merges adjacent ops of the same kind, concatenating their texts.
EditScript coalesce(const EditScript& script);

std::size_t edit_cost(const EditScript& script);  // deletes + inserts

// Reconstruct the generated (keeps + deletes) and expected (keeps +
// inserts) sequences a script was computed from.
std::vector<std::string> replay_generated(const EditScript& script);
std::vector<std::string> replay_expected(const EditScript& script);

// Splits on '\n'; a trailing newline does not produce a final empty line.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace forge::diff
