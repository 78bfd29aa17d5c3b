#include "forge/diff/diff.hpp"

#include <algorithm>

namespace forge::diff {

namespace {

// Forward Myers over any indexable sequence pair; to_text turns one
// element into the op payload.
template <typename Seq, typename ToText>
EditScript myers(const Seq& a, const Seq& b, ToText to_text) {
    const int n = static_cast<int>(a.size());
    const int m = static_cast<int>(b.size());
    const int max_d = n + m;
    std::vector<int> v(static_cast<std::size_t>(2 * max_d + 1), 0);
    auto vat = [max_d](std::vector<int>& vec, int k) -> int& { return vec[static_cast<std::size_t>(k + max_d)]; };

    std::vector<std::vector<int>> trace;
    int d_found = -1;
    for (int d = 0; d <= max_d && d_found < 0; ++d) {
        for (int k = -d; k <= d; k += 2) {
            int x;
            if (k == -d || (k != d && vat(v, k - 1) < vat(v, k + 1)))
                x = vat(v, k + 1);
            else
                x = vat(v, k - 1) + 1;
            int y = x - k;
            while (x < n && y < m && a[x] == b[y]) {
                ++x;
                ++y;
            }
            vat(v, k) = x;
            if (x >= n && y >= m) {
                d_found = d;
                break;
            }
        }
        trace.push_back(v);
    }

    EditScript rev;
    int x = n, y = m;
    for (int d = d_found; d > 0; --d) {
        auto& pv = trace[static_cast<std::size_t>(d - 1)];
        const int k = x - y;
        int prev_k;
        if (k == -d || (k != d && vat(pv, k - 1) < vat(pv, k + 1)))
            prev_k = k + 1;
        else
            prev_k = k - 1;
        const int prev_x = vat(pv, prev_k);
        const int prev_y = prev_x - prev_k;
        while (x > prev_x && y > prev_y) {
            rev.push_back({EditKind::Keep, to_text(a[x - 1])});
            --x;
            --y;
        }
        if (prev_k == k + 1) {
            rev.push_back({EditKind::Insert, to_text(b[y - 1])});
            --y;
        } else {
            rev.push_back({EditKind::Delete, to_text(a[x - 1])});
            --x;
        }
    }
    while (x > 0 && y > 0) {
        rev.push_back({EditKind::Keep, to_text(a[x - 1])});
        --x;
        --y;
    }
    std::reverse(rev.begin(), rev.end());
    return rev;
}

}  // namespace

EditScript line_diff(std::span<const std::string> generated, std::span<const std::string> expected) {
    return myers(generated, expected, [](const std::string& s) { return s; });
}

EditScript char_diff(std::string_view generated, std::string_view expected) {
    return myers(generated, expected, [](char c) { return std::string(1, c); });
}

EditScript coalesce(const EditScript& script) {
    EditScript out;
    for (const auto& op : script) {
        if (!out.empty() && out.back().kind == op.kind)
            out.back().text += op.text;
        else
            out.push_back(op);
    }
    return out;
}

std::size_t edit_cost(const EditScript& script) {
    std::size_t n = 0;
    for (const auto& op : script)
        if (op.kind != EditKind::Keep) ++n;
    return n;
}

std::vector<std::string> replay_generated(const EditScript& script) {
    std::vector<std::string> out;
    for (const auto& op : script)
        if (op.kind != EditKind::Insert) out.push_back(op.text);
    return out;
}

std::vector<std::string> replay_expected(const EditScript& script) {
    std::vector<std::string> out;
    for (const auto& op : script)
        if (op.kind != EditKind::Delete) out.push_back(op.text);
    return out;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            lines.emplace_back(text.substr(start));
            break;
        }
        std::string_view line = text.substr(start, nl - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line);
        start = nl + 1;
    }
    return lines;
}

}  // namespace forge::diff
