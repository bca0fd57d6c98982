#include "reframe/stats/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "reframe/core/error.hpp"
#include "reframe/core/random.hpp"

namespace reframe::stats {

namespace {

void check_inputs(std::span<const double> xs, std::span<const double> ys)
{
  if (xs.size() != ys.size()) throw Error(ErrorCode::InvalidInput, "pearson inputs differ in length");
  if (xs.size() < 3) throw Error(ErrorCode::InvalidInput, "pearson needs at least 3 pairs");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw Error(ErrorCode::InvalidInput, "pearson inputs must be finite");
  }
}

/// Centered copy scaled to unit norm, so r is a plain dot product.
std::vector<double> standardize(std::span<const double> v)
{
  double m = 0.0;
  for (const double x : v) m += x;
  m /= static_cast<double>(v.size());
  std::vector<double> out(v.begin(), v.end());
  double ss = 0.0;
  for (auto& x : out) {
    x -= m;
    ss += x * x;
  }
  if (ss == 0.0) throw Error(ErrorCode::DegenerateInput, "pearson input has zero variance");
  const double norm = std::sqrt(ss);
  for (auto& x : out) x /= norm;
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b)
{
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double pearson_r(std::span<const double> xs, std::span<const double> ys)
{
  check_inputs(xs, ys);
  const auto n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateInput, "pearson input has zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys, long permutations,
                          std::uint64_t seed)
{
  if (permutations < 1) throw Error(ErrorCode::InvalidInput, "permutations must be >= 1");
  const double r = pearson_r(xs, ys);
  const auto zx = standardize(xs);
  auto zy = standardize(ys);
  // Permuted statistics are computed the same way as the observed one so
  // exact ties (e.g. a permutation equal to the identity) count as hits.
  const double observed = std::fabs(dot(zx, zy));
  const double slack = 1e-12;
  Rng rng(seed);
  long hits = 0;
  for (long i = 0; i < permutations; ++i) {
    rng.shuffle(zy);
    if (std::fabs(dot(zx, zy)) >= observed - slack) ++hits;
  }
  return {r, static_cast<long>(xs.size()), static_cast<double>(hits + 1) / static_cast<double>(permutations + 1),
          permutations};
}

}  // namespace reframe::stats
