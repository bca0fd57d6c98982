#include <doctest.h>

#include <cmath>
#include <sstream>

#include "expect.hpp"
#include "oracles.hpp"
#include "reframe/core/random.hpp"
#include "reframe/stats/bootstrap.hpp"
#include "reframe/stats/correlate.hpp"
#include "reframe/stats/correlation.hpp"
#include "reframe/stats/tests.hpp"
#include "reframe/stats/text_overlap.hpp"

using namespace reframe;
using namespace reframe::stats;

namespace {

std::string random_sentence(Rng& rng, std::size_t vocab)
{
  static const std::vector<std::string> words{"i", "can", "try", "again", "the", "plan", "will", "work", "it",
                                              "is", "okay", "to", "feel", "tired", "and", "rest", "today", "now"};
  const auto len = 1 + rng.uniform_index(12);
  std::string s;
  for (std::uint64_t i = 0; i < len; ++i) {
    if (!s.empty()) s += ' ';
    s += words[rng.uniform_index(std::min(vocab, words.size()))];
  }
  return s;
}

}  // namespace

TEST_CASE("bleu identity and disjoint cases")
{
  CHECK(bleu("I can keep trying today", {"I can keep trying today"}) == 1.0);
  CHECK(bleu("a b", {"a b"}) == 1.0);
  CHECK(bleu("alpha beta gamma delta", {"one two three four"}) <= 1e-6);
  CHECK(expect::error_code([] { bleu("  ", {"x"}); }) == ErrorCode::InvalidInput);
}

TEST_CASE("bleu hand-tallied sentence pairs")
{
  // the cat sat on the mat | the cat sat on a mat
  // 1-grams: the(min 2,1) cat sat on mat -> 5/6
  // 2-grams: the cat, cat sat, sat on -> 3/5
  // 3-grams: the cat sat, cat sat on -> 2/4
  // 4-grams: the cat sat on -> 1/3
  // equal lengths, BP = 1
  const double expected = std::pow((5.0 / 6.0) * (3.0 / 5.0) * (2.0 / 4.0) * (1.0 / 3.0), 0.25);
  CHECK(std::abs(bleu("the cat sat on the mat", {"the cat sat on a mat"}) - expected) < 1e-9);

  // Short candidate: orders 1..3 all match fully, BP = exp(1 - 6/3).
  CHECK(std::abs(bleu("the cat sat", {"the cat sat on the mat"}) - std::exp(-1.0)) < 1e-9);

  // No 4-gram match: 5/6, 3/5, 1/4 and epsilon/3.
  const double eps = (5.0 / 6.0) * (3.0 / 5.0) * (1.0 / 4.0) * (1e-9 / 3.0);
  CHECK(std::abs(bleu("the cat sat on the mat", {"the cat is on the mat"}) - std::pow(eps, 0.25)) < 1e-12);

  // Closest reference length wins; ties go to the shorter one.
  CHECK(bleu("a b c d", {"a b c d e f g h", "a b c d"}) == 1.0);
}

TEST_CASE("corpus bleu pools counts")
{
  const std::vector<std::string> cands{"the cat sat on the mat", "the cat sat on the mat"};
  const std::vector<std::vector<std::string>> refs{{"the cat sat on a mat"}, {"the cat sat on a mat"}};
  CHECK(corpus_bleu(cands, refs) == doctest::Approx(bleu(cands[0], refs[0])).epsilon(1e-12));
}

TEST_CASE("rouge examples")
{
  CHECK(rouge("a b c", "a b c", RougeVariant::R1) == 1.0);
  CHECK(rouge("a b c", "a b c", RougeVariant::RL) == 1.0);
  CHECK(std::abs(rouge("a b c", "a x c", RougeVariant::R1) - 2.0 / 3.0) < 1e-9);
  CHECK(std::abs(rouge("a b c", "a x c", RougeVariant::RL) - 2.0 / 3.0) < 1e-9);
  CHECK(rouge("a b", "c d", RougeVariant::R1) == 0.0);
  CHECK(rouge("a b", "c d", RougeVariant::RL) == 0.0);
  // LCS "a c" of lengths 4 and 3: P = 2/4, R = 2/3.
  CHECK(rouge("a b c d", "a x c", RougeVariant::RL) == doctest::Approx(2.0 * 0.5 * (2.0 / 3.0) / (0.5 + 2.0 / 3.0)));
  CHECK(rouge("The Cat", "the cat", RougeVariant::R1) == 1.0);
}

TEST_CASE("text overlap bounds and symmetry on fuzzed inputs")
{
  Rng rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_sentence(rng, 6 + rng.uniform_index(12));
    const auto b = random_sentence(rng, 6 + rng.uniform_index(12));
    const auto c = random_sentence(rng, 18);
    const double bl = bleu(a, {b, c});
    CHECK(bl >= 0.0);
    CHECK(bl <= 1.0);
    for (const auto v : {RougeVariant::R1, RougeVariant::RL}) {
      const double r = rouge(a, b, v);
      CHECK(r >= 0.0);
      CHECK(r <= 1.0);
      CHECK(r == doctest::Approx(rouge(b, a, v)).epsilon(1e-12));
    }
  }
}

TEST_CASE("pearson examples")
{
  const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> lin, neg;
  for (const double x : xs) {
    lin.push_back(2 * x + 1);
    neg.push_back(-x);
  }
  CHECK(std::abs(pearson_r(xs, lin) - 1.0) < 1e-12);
  CHECK(std::abs(pearson_r(xs, neg) + 1.0) < 1e-12);

  const std::vector<double> fx{0.3, 1.7, 2.2, -0.4, 5.1, 3.3, 2.8, 0.0, 4.4, 1.1};
  const std::vector<double> fy{1.2, 2.9, 2.0, 0.1, 4.7, 2.2, 3.9, -1.0, 3.1, 1.5};
  CHECK(std::abs(pearson_r(fx, fy) - oracle::pearson(fx, fy)) < 1e-12);

  const auto res = pearson(xs, lin, 999, 4);
  CHECK(res.p_value <= 2.0 / 1000.0);
  CHECK(res.permutations == 999);
  CHECK(res.n == 10);
  CHECK(pearson(fx, fy, 500, 7).p_value == pearson(fx, fy, 500, 7).p_value);

  CHECK(expect::error_code([] { pearson_r(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}); }) ==
        ErrorCode::DegenerateInput);
  CHECK(expect::error_code([] { pearson_r(std::vector<double>{1, 2}, std::vector<double>{1, 2}); }) ==
        ErrorCode::InvalidInput);
  CHECK(expect::error_code([] { pearson_r(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}); }) ==
        ErrorCode::InvalidInput);
}

TEST_CASE("pearson bounds on fuzzed inputs")
{
  Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const auto n = 3 + rng.uniform_index(30);
    std::vector<double> x, y;
    const double scale = std::pow(10.0, rng.uniform(-6, 6));
    for (std::uint64_t j = 0; j < n; ++j) {
      x.push_back(scale * rng.normal());
      y.push_back(rng.bernoulli(0.5) ? x.back() * 3.0 : rng.normal());
    }
    const double r = pearson_r(x, y);
    CHECK(r >= -1.0);
    CHECK(r <= 1.0);
  }
}

TEST_CASE("bootstrap intervals")
{
  const std::vector<double> constant(20, 3.5);
  const auto c = bootstrap_ci(constant, Statistic::Mean, 1000, 0.95, 1);
  CHECK(c.lo == 3.5);
  CHECK(c.hi == 3.5);
  CHECK(c.point == 3.5);

  Rng rng(8);
  std::vector<double> xs;
  for (int i = 0; i < 50; ++i) xs.push_back(rng.normal());
  const auto a = bootstrap_ci(xs, Statistic::Mean, 2000, 0.95, 42);
  const auto b = bootstrap_ci(xs, Statistic::Mean, 2000, 0.95, 42);
  CHECK(a.lo == b.lo);
  CHECK(a.hi == b.hi);
  CHECK(a.lo <= a.point);
  CHECK(a.point <= a.hi);
  CHECK(a.resamples == 2000);

  CHECK(expect::error_code([] { bootstrap_ci(std::vector<double>{1.0}); }) == ErrorCode::InsufficientData);
  CHECK(expect::error_code([] { bootstrap_ci(std::vector<double>{0.0, 0.5}, Statistic::Proportion); }) ==
        ErrorCode::InvalidInput);

  const std::vector<double> sorted{1, 2, 3, 4};
  CHECK(quantile_sorted(sorted, 0.5) == 2.5);
  CHECK(quantile_sorted(sorted, 0.0) == 1.0);
  CHECK(quantile_sorted(sorted, 1.0) == 4.0);
}

TEST_CASE("bootstrap proportion coverage")
{
  Rng rng(2718);
  int covered = 0;
  for (int run = 0; run < 100; ++run) {
    std::vector<double> draws;
    for (int i = 0; i < 1000; ++i) draws.push_back(rng.bernoulli(0.4) ? 1.0 : 0.0);
    const auto ci = bootstrap_ci(draws, Statistic::Proportion, 2000, 0.95, static_cast<std::uint64_t>(run));
    if (ci.lo <= 0.4 && 0.4 <= ci.hi) ++covered;
  }
  CHECK(covered >= 93);
}

TEST_CASE("bootstrap difference interval")
{
  const std::vector<double> a{1, 2, 3, 4, 5, 1, 2, 3, 4, 5};
  const std::vector<double> b{3, 4, 5, 6, 7, 3, 4, 5, 6, 7};
  const auto d = bootstrap_diff_ci(a, b, 2000, 0.95, 5);
  CHECK(d.point == 2.0);
  CHECK(d.lo > 0.0);
  CHECK(d.hi < 4.0);
}

TEST_CASE("two-proportion test")
{
  const auto eq = two_proportion_test(30, 100, 60, 200);
  CHECK(eq.z == 0.0);
  CHECK(eq.p == 1.0);

  const auto t = two_proportion_test(397, 1000, 255, 1000);
  const double pooled = (397.0 + 255.0) / 2000.0;
  const double z = (0.397 - 0.255) / std::sqrt(pooled * (1.0 - pooled) * (2.0 / 1000.0));
  CHECK(std::abs(t.z - z) < 1e-9);
  CHECK(t.z == doctest::Approx(6.77).epsilon(0.01));
  CHECK(t.p < 1e-5);

  const auto swapped = two_proportion_test(255, 1000, 397, 1000);
  CHECK(swapped.z == -t.z);
  CHECK(swapped.p == t.p);
  CHECK(expect::error_code([] { two_proportion_test(0, 0, 1, 2); }) == ErrorCode::DegenerateInput);
  CHECK(expect::error_code([] { two_proportion_test(3, 2, 1, 2); }) == ErrorCode::InvalidInput);
}

TEST_CASE("paired share test")
{
  // Counts from one multinomial sample: Var(k1 - k2) = n(p1 + p2 - (p1 - p2)^2).
  const auto t = paired_share_test(397, 255, 1000);
  const double z = 142.0 / std::sqrt(652.0 - 142.0 * 142.0 / 1000.0);
  CHECK(std::abs(t.z - z) < 1e-12);
  CHECK(t.p < 1e-5);
  CHECK(paired_share_test(100, 100, 300).p == 1.0);
  CHECK(paired_share_test(0, 0, 10).p == 1.0);
}

TEST_CASE("normal helpers")
{
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
  CHECK(two_sided_normal_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-10));
}

TEST_CASE("welch and mann-whitney")
{
  const std::vector<double> a{1, 2, 3, 4, 5};
  const std::vector<double> b{2, 4, 6, 8, 10};
  const auto t = welch_t_test(a, b);
  CHECK(t.t == doctest::Approx(3.0 / std::sqrt(2.5)).epsilon(1e-12));
  CHECK(t.df == doctest::Approx(6.25 / (0.25 / 4.0 + 4.0 / 4.0)).epsilon(1e-12));
  CHECK(t.p == doctest::Approx(0.1075).epsilon(0.01));

  const std::vector<double> lo{1, 2, 3};
  const std::vector<double> hi{4, 5, 6};
  const auto u = mann_whitney(lo, hi);
  CHECK(u.u == 9.0);
  const auto back = mann_whitney(hi, lo);
  CHECK(back.u == 0.0);
  CHECK(back.p == doctest::Approx(u.p));
  CHECK(back.z == doctest::Approx(-u.z));
  const std::vector<double> same{2, 2, 2};
  CHECK(mann_whitney(same, same).p == 1.0);
}

TEST_CASE("goodness of fit")
{
  const std::vector<long> even{10, 10, 10};
  CHECK(chi_square_uniform(even).statistic == 0.0);
  CHECK(chi_square_uniform(even).p == doctest::Approx(1.0));
  const std::vector<long> skew{20, 10};
  CHECK(chi_square_uniform(skew).statistic == doctest::Approx(10.0 / 3.0));
  CHECK(chi_square_uniform(skew).p == doctest::Approx(0.0679).epsilon(0.001));

  std::vector<double> grid;
  for (int i = 0; i < 200; ++i) grid.push_back((i + 0.5) / 200.0);
  CHECK(ks_uniform(grid).p > 0.99);
  std::vector<double> low;
  for (int i = 0; i < 200; ++i) low.push_back(i / 400.0);
  CHECK(ks_uniform(low).p < 1e-6);
}

TEST_CASE("correlate pipeline")
{
  std::vector<ScorePair> rows;
  for (const double r : {0.3, 0.6, 0.9}) {
    const auto planted = planted_correlation_pairs(200, r, 11, "r" + std::to_string(r).substr(0, 3));
    rows.insert(rows.end(), planted.begin(), planted.end());
  }
  std::stringstream io;
  write_score_pairs(io, rows);
  const auto back = read_score_pairs(io);
  REQUIRE(back.size() == 600);
  const auto out = correlate(back, {500, 3});
  REQUIRE(out.size() == 3);
  CHECK(out.at("r0.3").r == doctest::Approx(0.3).epsilon(1e-9));
  CHECK(out.at("r0.6").r == doctest::Approx(0.6).epsilon(1e-9));
  CHECK(out.at("r0.9").r == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(out.at("r0.9").p_value < 0.01);

  std::stringstream plain("{\"entry_id\":\"a\",\"metric_score\":1,\"human_score\":2}\n"
                          "{\"entry_id\":\"b\",\"metric_score\":2,\"human_score\":3}\n"
                          "{\"entry_id\":\"c\",\"metric_score\":3,\"human_score\":5}\n");
  const auto all = correlate(read_score_pairs(plain), {100, 1});
  CHECK(all.count("all") == 1);
}
