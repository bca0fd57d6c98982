#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace reframe::stats {

struct ZTest {
  double z = 0.0;
  double p = 1.0;
};

struct TTest {
  double t = 0.0;
  double df = 0.0;
  double p = 1.0;
};

struct MannWhitney {
  double u = 0.0;
  double z = 0.0;
  double p = 1.0;
};

struct GoodnessOfFit {
  double statistic = 0.0;
  double p = 1.0;
};

double normal_cdf(double x);
double two_sided_normal_p(double z);

/// Pooled two-proportion z-test for independent groups.
ZTest two_proportion_test(long k1, long n1, long k2, long n2);

/// Compares two category shares drawn from the same n multinomial trials,
/// where the counts are negatively correlated:
/// z = (k1 - k2) / sqrt(k1 + k2 - (k1 - k2)^2 / n).
ZTest paired_share_test(long k1, long k2, long n);

/// Welch's unequal-variance t-test on b - a.
TTest welch_t_test(std::span<const double> a, std::span<const double> b);

/// Mann-Whitney U for b against a with the tie-corrected normal approximation.
MannWhitney mann_whitney(std::span<const double> a, std::span<const double> b);

/// One-sample Kolmogorov-Smirnov test against Uniform(0, 1).
GoodnessOfFit ks_uniform(std::vector<double> samples);

/// Chi-square test that categorical counts are equally likely.
GoodnessOfFit chi_square_uniform(std::span<const long> counts);

}  // namespace reframe::stats
