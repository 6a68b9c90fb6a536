#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace brickgen::detail {

/// Whole-file read; throws NotFound when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes via a sibling temp file and rename, so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace brickgen::detail
