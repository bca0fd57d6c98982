#include "reframe/stats/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/core/random.hpp"

namespace reframe::stats {

namespace {

void check_level(double level, long resamples)
{
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidInput, "level must lie in (0, 1)");
  if (resamples < 1) throw Error(ErrorCode::InvalidInput, "resamples must be >= 1");
}

double mean(std::span<const double> v)
{
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double resampled_mean(std::span<const double> v, Rng& rng)
{
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[rng.uniform_index(v.size())];
  return s / static_cast<double>(v.size());
}

IntervalEstimate percentile_interval(double point, std::vector<double> stats, double level)
{
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  IntervalEstimate out;
  out.point = point;
  out.lo = std::min(point, quantile_sorted(stats, tail));
  out.hi = std::max(point, quantile_sorted(stats, 1.0 - tail));
  out.level = level;
  out.resamples = static_cast<long>(stats.size());
  return out;
}

}  // namespace

double quantile_sorted(std::span<const double> sorted, double q)
{
  if (sorted.empty()) throw Error(ErrorCode::InsufficientData, "quantile of empty sample");
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

IntervalEstimate bootstrap_ci(std::span<const double> samples, Statistic statistic, long resamples, double level,
                              std::uint64_t seed)
{
  check_level(level, resamples);
  if (samples.size() < 2) throw Error(ErrorCode::InsufficientData, "bootstrap needs at least two samples");
  if (statistic == Statistic::Proportion) {
    for (const double x : samples) {
      if (x != 0.0 && x != 1.0) throw Error(ErrorCode::InvalidInput, "proportion samples must be 0 or 1");
    }
  }
  // Both statistics reduce to the sample mean; proportion only constrains
  // the input.
  Rng rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (auto& s : stats) s = resampled_mean(samples, rng);
  return percentile_interval(mean(samples), std::move(stats), level);
}

IntervalEstimate bootstrap_diff_ci(std::span<const double> a, std::span<const double> b, long resamples, double level,
                                   std::uint64_t seed)
{
  check_level(level, resamples);
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::InsufficientData, "bootstrap needs two samples per group");
  Rng rng(seed);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  for (auto& s : stats) {
    const double ma = resampled_mean(a, rng);
    s = resampled_mean(b, rng) - ma;
  }
  return percentile_interval(mean(b) - mean(a), std::move(stats), level);
}

}  // namespace reframe::stats
