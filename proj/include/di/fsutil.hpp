#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace di {

// Reads the whole file; throws Error(kMissingFile) if absent.
std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file then renames over `path`. Parent
// directories are created as needed.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace di
