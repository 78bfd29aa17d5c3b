#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/diff/diff.hpp"

namespace forge::diff {

// Delimiter-separated table. Header row auto-detected: a first row in
// which no cell parses as a number is taken as the header.
struct Table {
    bool has_header = false;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

struct TableParseOptions {
    char delimiter = ',';
    // auto-detect when unset
    std::optional<bool> header;
};

std::optional<Table> parse_table(std::string_view text, TableParseOptions opts = {});

enum class CellMark { Equal, Changed };
enum class RowMark { Equal, Changed, InsertedRow, DeletedRow };

struct TableDiffRow {
    RowMark mark;
    // Both sides aligned to `columns`; empty cells where a side lacks the column or row.
    std::vector<std::string> generated_cells;
    std::vector<std::string> expected_cells;
    std::vector<CellMark> cells;
};

struct TableDiff {
    // Set when either input failed to parse as a table; `fallback` then
    // holds a plain line diff of the raw texts.
    bool fell_back_to_lines = false;
    EditScript fallback;

    std::vector<std::string> columns;
    std::vector<TableDiffRow> rows;
};

// Columns aligned by header name when both sides have headers, else by
// index; rows aligned by line_diff over projected row serializations.
TableDiff table_diff(std::string_view generated, std::string_view expected, TableParseOptions opts = {});

}  // namespace forge::diff
