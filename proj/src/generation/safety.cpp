#include "reframe/generation/safety.hpp"

#include <fstream>
#include <sstream>

#include "reframe/core/assets.hpp"
#include "reframe/core/error.hpp"
#include "reframe/core/text.hpp"

namespace reframe::generation {

SafetyFilter SafetyFilter::parse(std::string_view pattern_file)
{
  SafetyFilter f;
  std::size_t line_no = 0;
  for (const auto& line : text::split_lines(pattern_file)) {
    ++line_no;
    const auto t = text::trim(line);
    if (t.empty() || t.starts_with('#')) continue;
    try {
      f.patterns_.emplace_back(std::string(t), std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    }
    catch (const std::regex_error& e) {
      throw Error(ErrorCode::InvalidInput,
                  "bad safety pattern on line " + std::to_string(line_no) + ": " + e.what());
    }
    f.sources_.emplace_back(t);
  }
  return f;
}

SafetyFilter SafetyFilter::load(const std::filesystem::path& path)
{
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open safety pattern file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

SafetyFilter SafetyFilter::shipped()
{
  static const SafetyFilter filter = parse(assets::get("safety/patterns.v1.txt"));
  return filter;
}

SafetyVerdict SafetyFilter::check(std::string_view text) const
{
  for (std::size_t i = 0; i < patterns_.size(); ++i) {
    if (pattern_matches(i, text)) return {false, sources_[i], i};
  }
  return {};
}

bool SafetyFilter::pattern_matches(std::size_t index, std::string_view text) const
{
  return std::regex_search(text.begin(), text.end(), patterns_.at(index));
}

}  // namespace reframe::generation
