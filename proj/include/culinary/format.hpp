#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace culinary {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string_view field);

/// Splits one CSV line (RFC 4180 quoting, no embedded newlines).
std::vector<std::string> split_csv_line(std::string_view line);

std::string trim(std::string_view text);
std::string to_lower_ascii(std::string_view text);
std::vector<std::string> split(std::string_view text, char separator);

}  // namespace culinary
