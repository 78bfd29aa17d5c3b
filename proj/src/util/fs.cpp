#include "forge/util/fs.hpp"

#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace forge::util {

std::optional<std::string> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) return std::nullopt;
    return std::move(out).str();
}

void write_file(const fs::path& p, std::string_view content) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw fs::filesystem_error("write_file failed", p, std::make_error_code(std::errc::io_error));
}

void copy_tree(const fs::path& src, const fs::path& dst) {
    fs::copy(src, dst, fs::copy_options::recursive | fs::copy_options::copy_symlinks);
}

void set_tree_permissions(const fs::path& root, fs::perms dir_mode, fs::perms file_mode, bool keep_exec) {
    auto apply = [&](const fs::path& p) {
        std::error_code ec;
        auto st = fs::symlink_status(p, ec);
        if (ec || fs::is_symlink(st)) return;
        if (fs::is_directory(st)) {
            fs::permissions(p, dir_mode, ec);
        } else {
            fs::perms mode = file_mode;
            if (keep_exec && (st.permissions() & fs::perms::owner_exec) != fs::perms::none)
                mode |= fs::perms::owner_exec | fs::perms::group_exec | fs::perms::others_exec;
            fs::permissions(p, mode, ec);
        }
    };
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it)
        apply(it->path());
    apply(root);
}

void remove_tree(const fs::path& root) {
    std::error_code ec;
    if (!fs::exists(fs::symlink_status(root, ec))) return;
    // Restore write+traverse bits so the recursive delete can proceed.
    std::error_code walk_ec;
    for (auto it = fs::recursive_directory_iterator(
             root, fs::directory_options::skip_permission_denied, walk_ec);
         it != fs::recursive_directory_iterator(); it.increment(walk_ec)) {
        if (walk_ec) break;
        std::error_code perm_ec;
        if (it->is_directory(perm_ec))
            fs::permissions(it->path(), fs::perms::owner_all, fs::perm_options::add, perm_ec);
    }
    fs::permissions(root, fs::perms::owner_all, fs::perm_options::add, ec);
    fs::remove_all(root, ec);
}

}  // namespace forge::util
