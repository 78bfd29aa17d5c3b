#pragma once

#include <filesystem>
#include <optional>
#include <string>

namespace forge::util {

std::optional<std::string> read_file(const std::filesystem::path& p);

// Creates parent directories as needed.
void write_file(const std::filesystem::path& p, std::string_view content);

// Recursive copy; follows the source's file names, overwrites nothing (dst must not exist).
void copy_tree(const std::filesystem::path& src, const std::filesystem::path& dst);

// chmod -R: directories get dir_mode, regular files keep their execute bits
// when keep_exec is set (mode | 0111 for executables).
void set_tree_permissions(const std::filesystem::path& root, std::filesystem::perms dir_mode,
                          std::filesystem::perms file_mode, bool keep_exec);

// remove_all that first restores write permission so read-only trees go away too.
void remove_tree(const std::filesystem::path& root);

}  // namespace forge::util
