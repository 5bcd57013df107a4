#pragma once

#include <filesystem>
#include <string>

namespace l2w::io {

// Write to a sibling temp file then rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& p, const std::string& content);
std::string read_text(const std::filesystem::path& p);

// Shortest round-trip decimal form of a double.
std::string format_double(double v);

}  // namespace l2w::io
