#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reframe::text {

std::string_view trim(std::string_view s) noexcept;
std::string to_lower(std::string_view s);
bool iequals(std::string_view a, std::string_view b) noexcept;
std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split_lines(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

/// Strips one layer of matching surrounding quotes (straight or curly).
std::string strip_quotes(std::string_view s);

/// First paragraph of a completion: text up to the first blank line after
/// any leading blank lines, trimmed.
std::string first_paragraph(std::string_view s);

}  // namespace reframe::text
