#include "reframe/stats/tests.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "reframe/core/error.hpp"

namespace reframe::stats {

namespace {

double mean(std::span<const double> v)
{
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v, double m)
{
  double ss = 0.0;
  for (const double x : v) ss += (x - m) * (x - m);
  return ss / static_cast<double>(v.size() - 1);
}

/// Kolmogorov distribution survival function.
double kolmogorov_q(double lambda)
{
  if (lambda < 1e-3) return 1.0;
  double sum = 0.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    sum += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

}  // namespace

double normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double two_sided_normal_p(double z)
{
  return std::min(1.0, std::erfc(std::fabs(z) / std::sqrt(2.0)));
}

ZTest two_proportion_test(long k1, long n1, long k2, long n2)
{
  if (n1 <= 0 || n2 <= 0) throw Error(ErrorCode::DegenerateInput, "two-proportion test needs nonempty groups");
  if (k1 < 0 || k1 > n1 || k2 < 0 || k2 > n2) throw Error(ErrorCode::InvalidInput, "counts must lie in [0, n]");
  const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
  if (se == 0.0) return {0.0, 1.0};
  const double z = (p1 - p2) / se;
  return {z, two_sided_normal_p(z)};
}

ZTest paired_share_test(long k1, long k2, long n)
{
  if (n <= 0) throw Error(ErrorCode::DegenerateInput, "share test needs at least one trial");
  if (k1 < 0 || k2 < 0 || k1 + k2 > n) throw Error(ErrorCode::InvalidInput, "category counts exceed trials");
  const double d = static_cast<double>(k1 - k2);
  const double var = static_cast<double>(k1 + k2) - d * d / static_cast<double>(n);
  if (var <= 0.0) return {0.0, 1.0};
  const double z = d / std::sqrt(var);
  return {z, two_sided_normal_p(z)};
}

TTest welch_t_test(std::span<const double> a, std::span<const double> b)
{
  if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::InsufficientData, "Welch test needs two values per group");
  const double ma = mean(a), mb = mean(b);
  const double va = sample_variance(a, ma) / static_cast<double>(a.size());
  const double vb = sample_variance(b, mb) / static_cast<double>(b.size());
  const double se2 = va + vb;
  if (se2 == 0.0) return {0.0, 0.0, ma == mb ? 1.0 : 0.0};
  const double t = (mb - ma) / std::sqrt(se2);
  const double df = se2 * se2 /
                    (va * va / static_cast<double>(a.size() - 1) + vb * vb / static_cast<double>(b.size() - 1));
  const boost::math::students_t dist(df);
  const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
  return {t, df, std::min(1.0, p)};
}

MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b)
{
  if (a.empty() || b.empty()) throw Error(ErrorCode::InsufficientData, "Mann-Whitney needs nonempty groups");
  struct Item {
    double v;
    bool from_b;
  };
  std::vector<Item> all;
  for (const double x : a) all.push_back({x, false});
  for (const double x : b) all.push_back({x, true});
  std::sort(all.begin(), all.end(), [](const Item& l, const Item& r) { return l.v < r.v; });

  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;
  double rank_sum_b = 0.0;
  double tie_term = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].v == all[i].v) ++j;
    const double avg_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].from_b) rank_sum_b += avg_rank;
    }
    i = j;
  }
  const double u = rank_sum_b - n2 * (n2 + 1.0) / 2.0;
  const double mu = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (var <= 0.0) return {u, 0.0, 1.0};
  const double z = (u - mu) / std::sqrt(var);
  return {u, z, two_sided_normal_p(z)};
}

GoodnessOfFit ks_uniform(std::vector<double> samples)
{
  if (samples.empty()) throw Error(ErrorCode::InsufficientData, "KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = std::clamp(samples[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sq = std::sqrt(n);
  return {d, kolmogorov_q((sq + 0.12 + 0.11 / sq) * d)};
}

GoodnessOfFit chi_square_uniform(std::span<const long> counts)
{
  if (counts.size() < 2) throw Error(ErrorCode::InsufficientData, "chi-square needs two or more categories");
  const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), 0L));
  if (total <= 0.0) throw Error(ErrorCode::InsufficientData, "chi-square needs observations");
  const double expected = total / static_cast<double>(counts.size());
  double chi2 = 0.0;
  for (const long c : counts) chi2 += (static_cast<double>(c) - expected) * (static_cast<double>(c) - expected) / expected;
  const boost::math::chi_squared dist(static_cast<double>(counts.size() - 1));
  return {chi2, boost::math::cdf(boost::math::complement(dist, chi2))};
}

}  // namespace reframe::stats
