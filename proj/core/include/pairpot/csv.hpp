#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace pairpot {

/// Shortest decimal form that round-trips the double (to_chars). Used
/// for report CSVs so outputs are byte-stable across runs.
std::string format_double(double v);

/// Scientific form with 17 significant digits; round-trips exactly and
/// always carries full precision. Used for point coordinate files.
std::string format_double_full(double v);

std::string format_u64(std::uint64_t v);

/// RFC-4180-style field quoting: wraps in double quotes when the field
/// contains a comma, quote, or newline, doubling embedded quotes.
std::string csv_escape(std::string_view field);

/// Joins fields with commas and a trailing LF.
std::string csv_row(const std::vector<std::string>& fields);

/// Parses a double, rejecting trailing junk. Throws std::invalid_argument.
double parse_double(std::string_view text);

/// Writes `content` to `path` with LF endings exactly as given.
/// Throws std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

} // namespace pairpot
