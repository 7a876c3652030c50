#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace nbc::text {

/// Length in bytes of the Unicode White_Space sequence starting at `s[pos]`,
/// or 0 if none starts there. Invalid UTF-8 is never whitespace.
std::size_t whitespace_length(std::string_view s, std::size_t pos) noexcept;

/// True when every character of `s` is (Unicode) whitespace; true for "".
bool is_blank(std::string_view s) noexcept;

/// Splits on LF; a CR directly before the LF is dropped and a trailing
/// line terminator does not produce an extra empty line.
std::vector<std::string> split_lines(std::string_view s);

/// Joins with LF, no trailing terminator.
std::string join_lines(const std::vector<std::string>& lines);

std::string_view trim(std::string_view s) noexcept;

}  // namespace nbc::text
