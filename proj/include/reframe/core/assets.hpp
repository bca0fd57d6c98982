#pragma once

#include <map>
#include <string>
#include <string_view>

namespace reframe::assets {

/// Text assets compiled in from assets/ (prompt templates, pattern lists).
const std::map<std::string, std::string, std::less<>>& registry();

/// Throws Error(InvalidInput) when the asset does not exist.
const std::string& get(std::string_view name);

}  // namespace reframe::assets
