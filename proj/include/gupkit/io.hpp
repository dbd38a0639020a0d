#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gupkit {

/// Shortest decimal representation that round-trips the exact double.
/// Locale-independent; used everywhere a floating value hits a file so
/// reruns are byte-identical.
std::string fmt_double(double v);

/// Strict double parse of a full token (std::from_chars underneath).
/// Throws std::invalid_argument on trailing garbage or empty input.
double parse_double(std::string_view token);

/// Strict non-negative integer parse; throws std::invalid_argument.
long long parse_int(std::string_view token);

/// Split one CSV line on commas. No quoting rules: none of the formats
/// written here ever contain commas inside fields.
std::vector<std::string> split_csv_line(std::string_view line);

void warn(const std::string& message);

/// Write a whole file atomically enough for our purposes; throws
/// std::runtime_error naming the path when the file cannot be opened.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace gupkit
