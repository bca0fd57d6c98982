#pragma once

#include <cstdint>
#include <span>

namespace reframe::stats {

struct CorrelationResult {
  double r = 0.0;
  long n = 0;
  /// Two-sided permutation p-value, (hits + 1) / (permutations + 1).
  double p_value = 1.0;
  long permutations = 0;
};

/// Product-moment correlation. Throws DegenerateInput on zero variance and
/// InvalidInput on mismatched or short (< 3) inputs.
double pearson_r(std::span<const double> xs, std::span<const double> ys);

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys, long permutations = 10000,
                          std::uint64_t seed = 0);

}  // namespace reframe::stats
