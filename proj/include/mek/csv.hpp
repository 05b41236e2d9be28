#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mek/core.hpp"

namespace mek {

// Locale-independent numeric formatting: 12 significant digits, '.' decimal
// separator, "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

// Shortest representation that parses back to the same double.
std::string format_double_exact(double v);

// Locale-independent parse of a full numeric field. Throws ParseError.
double parse_double(std::string_view field);
long parse_long(std::string_view field);

// Splits one CSV line on commas; empty fields are preserved.
std::vector<std::string> split_csv_line(std::string_view line);

// Whole file as lines, without trailing newlines. Throws Error on I/O
// failure.
std::vector<std::string> read_lines(const std::string& path);

// Writes to `path + <tmp suffix>` and renames onto `path` on success, so a
// failed run never leaves a truncated artifact behind.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace mek
