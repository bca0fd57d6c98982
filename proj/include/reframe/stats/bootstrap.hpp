#pragma once

#include <cstdint>
#include <span>

namespace reframe::stats {

enum class Statistic { Mean, Proportion };

struct IntervalEstimate {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.95;
  long resamples = 0;
};

/// Percentile bootstrap. Proportion samples must be 0 or 1. The interval is
/// widened to include the point estimate if resampling noise excludes it.
IntervalEstimate bootstrap_ci(std::span<const double> samples, Statistic statistic = Statistic::Mean,
                              long resamples = 10000, double level = 0.95, std::uint64_t seed = 0);

/// Percentile bootstrap for mean(b) - mean(a), resampling each group
/// independently.
IntervalEstimate bootstrap_diff_ci(std::span<const double> a, std::span<const double> b, long resamples = 10000,
                                   double level = 0.95, std::uint64_t seed = 0);

/// Linear-interpolation quantile of sorted values, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

}  // namespace reframe::stats
