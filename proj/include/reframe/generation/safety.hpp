#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

namespace reframe::generation {

struct SafetyVerdict {
  bool allowed = true;
  std::optional<std::string> matched_pattern;  // source text of the first matching pattern
  std::optional<std::size_t> pattern_index;
};

/// Case-insensitive regular-expression blocklist for model output.
class SafetyFilter {
public:
  /// One ECMAScript regex per line; '#' comment lines and blank lines are
  /// skipped. Throws Error(InvalidInput) on a bad pattern.
  static SafetyFilter parse(std::string_view pattern_file);
  static SafetyFilter load(const std::filesystem::path& path);
  /// The compiled-in default list.
  static SafetyFilter shipped();

  /// First matching pattern wins.
  [[nodiscard]] SafetyVerdict check(std::string_view text) const;
  [[nodiscard]] bool pattern_matches(std::size_t index, std::string_view text) const;

  [[nodiscard]] std::size_t size() const noexcept { return patterns_.size(); }
  [[nodiscard]] const std::string& pattern(std::size_t index) const { return sources_.at(index); }

private:
  std::vector<std::string> sources_;
  std::vector<std::regex> patterns_;
};

}  // namespace reframe::generation
