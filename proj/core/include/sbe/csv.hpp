#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sbe {

/// Shortest text that parses back to the same double.
std::string format_number(double v);

/// Quotes a field when it contains a comma, quote or newline.
std::string csv_field(std::string_view text);

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_csv_line(std::string_view line);

/// Strict full-string parse; throws std::invalid_argument on junk.
double parse_number(std::string_view text);

}  // namespace sbe
