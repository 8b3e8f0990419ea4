#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace specrouter {

// Shortest-exact decimal form (%.17g after round-trip trimming would be
// overkill here: plain %.17g already reparses bit-exactly, which is all the
// file formats promise).
std::string format_real(double value);

// strtod with full-string validation; NaN/inf rejected unless allow_nonfinite.
double parse_real(const std::string& text, bool allow_nonfinite = false);

std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines);

std::vector<std::string> split(const std::string& line, char sep);

}  // namespace specrouter
