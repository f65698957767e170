#pragma once

#include <filesystem>
#include <string>

namespace tsreason::util {

/// Whole file as a string; throws OpError("FileNotFound") when absent and
/// OpError("IoError") on read failure.
std::string read_text_file(const std::filesystem::path& path);

/// Write via temp file + rename so readers never observe a partial file.
/// Parent directories are created as needed. Throws OpError("IoError").
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace tsreason::util
