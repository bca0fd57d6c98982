#include "reframe/core/assets.hpp"

#include "reframe/core/error.hpp"

namespace reframe::assets {

const std::string& get(std::string_view name)
{
  const auto& table = registry();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw Error(ErrorCode::InvalidInput, "no embedded asset named '" + std::string(name) + "'");
  }
  return it->second;
}

}  // namespace reframe::assets
