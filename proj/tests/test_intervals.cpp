#include <gtest/gtest.h>

#include <cmath>

#include "mirlab/intervals.hpp"

namespace mirlab {
namespace {

std::vector<double> laplace_sample(std::uint64_t seed, std::size_t n, double mu, double b) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.laplace(mu, b);
  return x;
}

std::vector<double> exponential_sample(std::uint64_t seed, std::size_t n, double rate) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.exponential(rate);
  return x;
}

TEST(Intervals, FromSequence) {
  EXPECT_EQ(intervals_from_sequence<int>(std::vector<int>{0, 2, 1}), (std::vector<int>{2, -1}));
  EXPECT_EQ(intervals_from_sequence<int>(std::vector<int>{5, 5}), (std::vector<int>{0}));
  EXPECT_THROW(intervals_from_sequence<int>(std::vector<int>{0}), DegenerateInputError);
}

TEST(Intervals, LaplaceRecovered) {
  const auto x = laplace_sample(42, 10000, 0.0, 2.0);
  const auto a = interval_analysis(x);
  EXPECT_EQ(a.family, IntervalFamily::laplace);
  EXPECT_GE(*a.scale, 1.9);
  EXPECT_LE(*a.scale, 2.1);
  EXPECT_NEAR(*a.location, 0.0, 0.1);
  EXPECT_FALSE(a.rate.has_value());
  EXPECT_LT(a.ks_distance, 0.05);
  EXPECT_EQ(a.n, 10000u);
}

TEST(Intervals, ExponentialRecovered) {
  const auto x = exponential_sample(43, 10000, 1.5);
  const auto a = interval_analysis(x);
  EXPECT_EQ(a.family, IntervalFamily::exponential);
  EXPECT_GE(*a.rate, 1.45);
  EXPECT_LE(*a.rate, 1.55);
  EXPECT_LT(a.ks_distance, 0.05);
}

TEST(Intervals, SymmetricTwoPoint) {
  std::vector<double> x;
  for (int i = 0; i < 30; ++i) x.push_back(i % 2 == 0 ? -1.0 : 1.0);
  const auto a = interval_analysis(x);
  EXPECT_EQ(a.family, IntervalFamily::laplace);
  EXPECT_EQ(*a.location, 0.0);
  EXPECT_EQ(*a.scale, 1.0);
}

TEST(Intervals, MleIdentities) {
  const auto x = laplace_sample(7, 501, 1.0, 0.5);
  const auto a = interval_analysis(x);
  ASSERT_EQ(a.family, IntervalFamily::laplace);
  std::vector<double> sorted = x;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(*a.location, sorted[250]);
  double dev = 0.0, ll = 0.0;
  for (double v : x) dev += std::abs(v - sorted[250]);
  EXPECT_NEAR(*a.scale, dev / 501.0, 1e-12);
  for (double v : x) ll += -std::log(2.0 * *a.scale) - std::abs(v - *a.location) / *a.scale;
  EXPECT_NEAR(a.log_likelihood, ll, 1e-8 * std::abs(ll));

  const auto y = exponential_sample(8, 300, 2.0);
  const auto e = interval_analysis(y);
  ASSERT_EQ(e.family, IntervalFamily::exponential);
  double sum = 0.0, lle = 0.0;
  for (double v : y) sum += v;
  EXPECT_NEAR(*e.rate, 300.0 / sum, 1e-12);
  for (double v : y) lle += std::log(*e.rate) - *e.rate * v;
  EXPECT_NEAR(e.log_likelihood, lle, 1e-8 * std::abs(lle));
}

TEST(Intervals, SignFlipSymmetry) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto x = laplace_sample(seed, 200, 0.3, 1.2);
    const auto a = interval_analysis(x);
    for (auto& v : x) v = -v;
    const auto b = interval_analysis(x);
    EXPECT_EQ(a.family, b.family);
    EXPECT_NEAR(*a.scale, *b.scale, 1e-12);
    EXPECT_NEAR(*a.location, -*b.location, 1e-12);
    EXPECT_GE(a.ks_distance, 0.0);
    EXPECT_LE(a.ks_distance, 1.0);
  }
}

TEST(Intervals, Errors) {
  EXPECT_THROW(interval_analysis(std::vector<double>(19, 1.0)), DegenerateInputError);
  EXPECT_THROW(interval_analysis(std::vector<double>(25, 2.0)), DegenerateInputError);
  std::vector<double> bad(25, 1.0);
  bad[3] = NAN;
  EXPECT_THROW(interval_analysis(bad), std::invalid_argument);
}

TEST(IntervalBootstrap, DeterministicAndBracketing) {
  const auto x = laplace_sample(11, 2000, 0.0, 2.0);
  const auto a = interval_param_bootstrap(x, 500, 3);
  const auto b = interval_param_bootstrap(x, 500, 3);
  ASSERT_EQ(a.family, IntervalFamily::laplace);
  ASSERT_EQ(a.parameters.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(a.parameters[i].lo, b.parameters[i].lo);
    EXPECT_EQ(a.parameters[i].hi, b.parameters[i].hi);
    EXPECT_LE(a.parameters[i].lo, a.parameters[i].point);
    EXPECT_GE(a.parameters[i].hi, a.parameters[i].point);
  }
  EXPECT_EQ(a.parameters[1].name, "scale");

  // Constant-width sample: magnitudes all 1, mixed signs.
  std::vector<double> w;
  for (int i = 0; i < 40; ++i) w.push_back(i % 3 == 0 ? -1.0 : 1.0);
  const auto c = interval_param_bootstrap(w, 200, 1);
  for (const auto& p : c.parameters) {
    EXPECT_LE(p.lo, p.point);
    EXPECT_GE(p.hi, p.point);
  }
  EXPECT_THROW(interval_param_bootstrap(x, 10, 1), std::invalid_argument);
}

TEST(IntervalBootstrap, LaplaceScaleCoverage) {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto ci = interval_param_bootstrap(laplace_sample(900 + seed, 10000, 0.0, 2.0), 1000, seed);
    if (ci.parameters[1].lo <= 2.0 && 2.0 <= ci.parameters[1].hi) ++covered;
  }
  EXPECT_GE(covered, 8);
}

}  // namespace
}  // namespace mirlab
