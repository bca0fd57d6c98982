#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "reframe/core/types.hpp"

namespace reframe::dataset {

/// Generates `n` schema-valid entries from phrase tables. Every 40th entry
/// repeats an earlier entry's situation and thought so that retrieval ties
/// occur. Same (n, seed) gives identical output.
std::vector<DatasetEntry> make_synthetic_dataset(std::size_t n, std::uint64_t seed);

}  // namespace reframe::dataset
