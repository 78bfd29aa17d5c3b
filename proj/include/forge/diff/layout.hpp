#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/diff/diff.hpp"

namespace forge::diff {

enum class LayoutMode { SideBySide, Interleaved };

enum class RowKind { Keep, Changed, DeletedOnly, InsertedOnly };

// One display row. left = generated side, right = expected side.
struct LayoutRow {
    RowKind kind;
    std::optional<std::string> left;
    std::optional<std::string> right;

    bool operator==(const LayoutRow&) const = default;
};

struct DiffLayout {
    LayoutMode mode;
    std::vector<LayoutRow> rows;
};

// Side-by-side pairs each hunk's deletes with its inserts greedily in
// order; interleaved emits a hunk's deletes then its inserts.
DiffLayout layout(const EditScript& script, LayoutMode mode);

// Inverse of layout up to op order inside hunks: the multiset of script
// operations, recovered from the rows.
EditScript recover_ops(const DiffLayout& layout);

// Plain-text rendering for `code`-format feedback messages.
std::string render_text(const DiffLayout& layout);

// ANSI-colored rendering for the terminal (red deletions, green insertions).
std::string render_ansi(const DiffLayout& layout);

}  // namespace forge::diff
