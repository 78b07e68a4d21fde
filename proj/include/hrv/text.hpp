#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace hrv {

// Shortest decimal text that round-trips to the same double; locale-independent.
std::string format_double(double v);

// Strict decimal parse of a whole field. Returns false on any junk.
bool parse_double(std::string_view text, double& out);

// Writes via a sibling temp file and rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

std::string read_file(const std::filesystem::path& path);

}  // namespace hrv
