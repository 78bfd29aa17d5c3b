#include "forge/diff/layout.hpp"

#include <algorithm>

namespace forge::diff {

namespace {

void emit_hunk(std::vector<LayoutRow>& rows, std::vector<std::string>& dels,
               std::vector<std::string>& inss, LayoutMode mode) {
    if (mode == LayoutMode::SideBySide) {
        std::size_t paired = std::min(dels.size(), inss.size());
        for (std::size_t i = 0; i < paired; ++i)
            rows.push_back({RowKind::Changed, dels[i], inss[i]});
        for (std::size_t i = paired; i < dels.size(); ++i)
            rows.push_back({RowKind::DeletedOnly, dels[i], std::nullopt});
        for (std::size_t i = paired; i < inss.size(); ++i)
            rows.push_back({RowKind::InsertedOnly, std::nullopt, inss[i]});
    } else {
        for (auto& d : dels) rows.push_back({RowKind::DeletedOnly, d, std::nullopt});
        for (auto& i : inss) rows.push_back({RowKind::InsertedOnly, std::nullopt, i});
    }
    dels.clear();
    inss.clear();
}

}  // namespace

DiffLayout layout(const EditScript& script, LayoutMode mode) {
    DiffLayout out{mode, {}};
    std::vector<std::string> dels, inss;
    for (const auto& op : script) {
        switch (op.kind) {
            case EditKind::Keep:
                emit_hunk(out.rows, dels, inss, mode);
                out.rows.push_back({RowKind::Keep, op.text, op.text});
                break;
            case EditKind::Delete: dels.push_back(op.text); break;
            case EditKind::Insert: inss.push_back(op.text); break;
        }
    }
    emit_hunk(out.rows, dels, inss, mode);
    return out;
}

EditScript recover_ops(const DiffLayout& layout) {
    EditScript ops;
    for (const auto& row : layout.rows) {
        switch (row.kind) {
            case RowKind::Keep: ops.push_back({EditKind::Keep, *row.left}); break;
            case RowKind::Changed:
                ops.push_back({EditKind::Delete, *row.left});
                ops.push_back({EditKind::Insert, *row.right});
                break;
            case RowKind::DeletedOnly: ops.push_back({EditKind::Delete, *row.left}); break;
            case RowKind::InsertedOnly: ops.push_back({EditKind::Insert, *row.right}); break;
        }
    }
    return ops;
}

namespace {

std::string render(const DiffLayout& layout, bool ansi) {
    const char* red = ansi ? "\x1b[31m" : "";
    const char* green = ansi ? "\x1b[32m" : "";
    const char* reset = ansi ? "\x1b[0m" : "";
    std::string out;
    if (layout.mode == LayoutMode::Interleaved) {
        for (const auto& row : layout.rows) {
            switch (row.kind) {
                case RowKind::Keep: out += "  " + *row.left + "\n"; break;
                case RowKind::Changed:
                    out += std::string(red) + "- " + *row.left + reset + "\n";
                    out += std::string(green) + "+ " + *row.right + reset + "\n";
                    break;
                case RowKind::DeletedOnly: out += std::string(red) + "- " + *row.left + reset + "\n"; break;
                case RowKind::InsertedOnly: out += std::string(green) + "+ " + *row.right + reset + "\n"; break;
            }
        }
        return out;
    }
    std::size_t width = 0;
    for (const auto& row : layout.rows)
        if (row.left) width = std::max(width, row.left->size());
    width = std::min<std::size_t>(width, 80);
    auto pad = [width](const std::string& s) {
        return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
    };
    for (const auto& row : layout.rows) {
        std::string left = row.left.value_or("");
        std::string right = row.right.value_or("");
        const char* mark = "   ";
        const char* color = "";
        switch (row.kind) {
            case RowKind::Keep: break;
            case RowKind::Changed: mark = " | "; color = red; break;
            case RowKind::DeletedOnly: mark = " < "; color = red; break;
            case RowKind::InsertedOnly: mark = " > "; color = green; break;
        }
        out += color + pad(left) + mark + right + (ansi && *color ? reset : "") + "\n";
    }
    return out;
}

}  // namespace

std::string render_text(const DiffLayout& layout) { return render(layout, false); }

std::string render_ansi(const DiffLayout& layout) { return render(layout, true); }

}  // namespace forge::diff
