#include "forge/diff/table.hpp"

#include <algorithm>
#include <cstdlib>
#include <unordered_map>

namespace forge::diff {

namespace {

// RFC 4180-style field rules: quoted fields may contain delimiters,
// newlines, and doubled quotes. An unterminated quote fails the parse.
std::optional<std::vector<std::vector<std::string>>> parse_rows(std::string_view text, char delim) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    bool row_started = false;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto end_row = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
            row_started = true;
        } else if (c == delim) {
            end_field();
            row_started = true;
        } else if (c == '\n') {
            end_row();
        } else if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') {
            end_row();
            ++i;
        } else {
            field += c;
            field_started = true;
            row_started = true;
        }
    }
    if (in_quotes) return std::nullopt;
    if (row_started || field_started || !field.empty()) end_row();
    return rows;
}

bool looks_numeric(const std::string& s) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    std::strtod(begin, &end);
    return end != begin && *end == '\0';
}

std::string join_cells(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += '\x1f';
        out += cells[i];
    }
    return out;
}

}  // namespace

std::optional<Table> parse_table(std::string_view text, TableParseOptions opts) {
    auto rows = parse_rows(text, opts.delimiter);
    if (!rows || rows->empty()) return std::nullopt;

    // Ragged input is not a table.
    const std::size_t width = rows->front().size();
    for (const auto& r : *rows) {
        if (r.size() != width) return std::nullopt;
    }
    if (width == 0) return std::nullopt;

    Table t;
    bool header = opts.header ? *opts.header
                              : std::none_of(rows->front().begin(), rows->front().end(), looks_numeric);
    if (header && rows->size() >= 1) {
        t.has_header = true;
        t.header = std::move(rows->front());
        rows->erase(rows->begin());
    }
    t.rows = std::move(*rows);
    return t;
}

TableDiff table_diff(std::string_view generated, std::string_view expected, TableParseOptions opts) {
    TableDiff out;

    auto gen = parse_table(generated, opts);
    auto exp = parse_table(expected, opts);
    if (!gen || !exp || gen->has_header != exp->has_header) {
        out.fell_back_to_lines = true;
        auto ga = split_lines(generated);
        auto ea = split_lines(expected);
        out.fallback = line_diff(ga, ea);
        return out;
    }

    // Column alignment: expected's columns first, generated-only appended.
    // gen_col[i] / exp_col[i] give the source column index for output column i.
    std::vector<std::optional<std::size_t>> gen_col, exp_col;
    if (gen->has_header) {
        std::unordered_map<std::string, std::size_t> gen_index;
        for (std::size_t i = 0; i < gen->header.size(); ++i) gen_index.emplace(gen->header[i], i);
        std::vector<bool> gen_used(gen->header.size(), false);
        for (std::size_t i = 0; i < exp->header.size(); ++i) {
            out.columns.push_back(exp->header[i]);
            exp_col.push_back(i);
            auto it = gen_index.find(exp->header[i]);
            if (it != gen_index.end()) {
                gen_col.push_back(it->second);
                gen_used[it->second] = true;
            } else {
                gen_col.push_back(std::nullopt);
            }
        }
        for (std::size_t i = 0; i < gen->header.size(); ++i) {
            if (gen_used[i]) continue;
            out.columns.push_back(gen->header[i]);
            exp_col.push_back(std::nullopt);
            gen_col.push_back(i);
        }
    } else {
        std::size_t gw = gen->rows.empty() ? 0 : gen->rows.front().size();
        std::size_t ew = exp->rows.empty() ? 0 : exp->rows.front().size();
        std::size_t width = std::max(gw, ew);
        for (std::size_t i = 0; i < width; ++i) {
            out.columns.push_back(std::to_string(i));
            gen_col.push_back(i < gw ? std::optional(i) : std::nullopt);
            exp_col.push_back(i < ew ? std::optional(i) : std::nullopt);
        }
    }

    auto project = [&](const std::vector<std::string>& row,
                       const std::vector<std::optional<std::size_t>>& map) {
        std::vector<std::string> cells;
        cells.reserve(map.size());
        for (auto idx : map) cells.push_back(idx && *idx < row.size() ? row[*idx] : std::string());
        return cells;
    };

    std::vector<std::vector<std::string>> gen_proj, exp_proj;
    std::vector<std::string> gen_keys, exp_keys;
    for (const auto& r : gen->rows) {
        gen_proj.push_back(project(r, gen_col));
        gen_keys.push_back(join_cells(gen_proj.back()));
    }
    for (const auto& r : exp->rows) {
        exp_proj.push_back(project(r, exp_col));
        exp_keys.push_back(join_cells(exp_proj.back()));
    }

    EditScript script = line_diff(gen_keys, exp_keys);

    // Same hunk-pairing idea as the side-by-side layout: within a run of
    // non-keep ops, the i-th delete lines up with the i-th insert.
    std::size_t gi = 0, ei = 0;
    std::size_t op = 0;
    const std::size_t empty_width = out.columns.size();
    while (op < script.size()) {
        if (script[op].kind == EditKind::Keep) {
            TableDiffRow row;
            row.mark = RowMark::Equal;
            row.generated_cells = gen_proj[gi];
            row.expected_cells = exp_proj[ei];
            row.cells.assign(empty_width, CellMark::Equal);
            out.rows.push_back(std::move(row));
            ++gi;
            ++ei;
            ++op;
            continue;
        }
        std::size_t dels = 0, inss = 0;
        std::size_t end = op;
        while (end < script.size() && script[end].kind != EditKind::Keep) {
            if (script[end].kind == EditKind::Delete) ++dels;
            else ++inss;
            ++end;
        }
        std::size_t paired = std::min(dels, inss);
        for (std::size_t i = 0; i < paired; ++i) {
            TableDiffRow row;
            row.mark = RowMark::Changed;
            row.generated_cells = gen_proj[gi + i];
            row.expected_cells = exp_proj[ei + i];
            row.cells.reserve(empty_width);
            for (std::size_t c = 0; c < empty_width; ++c) {
                row.cells.push_back(row.generated_cells[c] == row.expected_cells[c] ? CellMark::Equal
                                                                                    : CellMark::Changed);
            }
            out.rows.push_back(std::move(row));
        }
        for (std::size_t i = paired; i < dels; ++i) {
            TableDiffRow row;
            row.mark = RowMark::DeletedRow;
            row.generated_cells = gen_proj[gi + i];
            row.expected_cells.assign(empty_width, std::string());
            row.cells.assign(empty_width, CellMark::Changed);
            out.rows.push_back(std::move(row));
        }
        for (std::size_t i = paired; i < inss; ++i) {
            TableDiffRow row;
            row.mark = RowMark::InsertedRow;
            row.generated_cells.assign(empty_width, std::string());
            row.expected_cells = exp_proj[ei + i];
            row.cells.assign(empty_width, CellMark::Changed);
            out.rows.push_back(std::move(row));
        }
        gi += dels;
        ei += inss;
        op = end;
    }
    return out;
}

}  // namespace forge::diff
