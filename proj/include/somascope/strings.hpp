#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace somascope {

[[nodiscard]] std::string_view trim(std::string_view s) noexcept;
[[nodiscard]] std::string to_lower_ascii(std::string_view s);
[[nodiscard]] std::vector<std::string_view> split(std::string_view s, char sep);
/// Parses the whole field as a finite double.
[[nodiscard]] bool parse_double(std::string_view s, double &out) noexcept;

}  // namespace somascope

namespace somascope {

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
/// Returns false on an unterminated quote.
[[nodiscard]] bool parse_csv_line(std::string_view line, std::vector<std::string> &fields);

/// Quotes a field when it contains a comma, quote or newline.
[[nodiscard]] std::string csv_escape(std::string_view field);

}  // namespace somascope
