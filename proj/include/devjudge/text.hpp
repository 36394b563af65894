#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace devjudge::text {

std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
bool icontains(std::string_view haystack, std::string_view needle);
std::string_view trim(std::string_view s) noexcept;
bool starts_with(std::string_view s, std::string_view prefix) noexcept;
bool ends_with(std::string_view s, std::string_view suffix) noexcept;
std::vector<std::string> split_lines(std::string_view s);

/// Largest index <= pos that does not fall inside a UTF-8 multi-byte sequence.
std::size_t utf8_floor(std::string_view s, std::size_t pos) noexcept;
/// Smallest index >= pos that does not fall inside a UTF-8 multi-byte sequence.
std::size_t utf8_ceil(std::string_view s, std::size_t pos) noexcept;
bool is_valid_utf8(std::string_view s, bool allow_truncated_tail = false) noexcept;

/// Strips the common leading indentation of all non-blank lines and trims
/// blank lines at both ends.
std::string dedent(std::string_view block);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Fixed-notation rendering of a double, trailing zeros removed.
std::string format_number(double value, int precision = 6);

}  // namespace devjudge::text
