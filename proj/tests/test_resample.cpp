#include <gtest/gtest.h>

#include <cmath>

#include "mirlab/resample.hpp"
#include "support.hpp"

namespace mirlab {
namespace {

TEST(Spearman, HandExample) {
  const std::vector<double> x = {1, 2, 3, 4, 5}, y = {1, 3, 2, 5, 4};
  EXPECT_EQ(spearman(x, y).rho, 0.8);
}

TEST(Spearman, MonotoneMapsAndReversal) {
  const std::vector<double> x = {0.3, 1.7, -2.0, 4.4, 0.9, 2.2};
  std::vector<double> up, down;
  for (double v : x) {
    up.push_back(std::exp(v));
    down.push_back(-v * v * v);
  }
  const auto r = spearman(x, up);
  EXPECT_EQ(r.rho, 1.0);
  EXPECT_EQ(r.p_value, 0.0);
  EXPECT_EQ(spearman(x, down).rho, -1.0);
}

TEST(Spearman, TiesAndErrors) {
  EXPECT_EQ(average_ranks(std::vector<double>{10, 20, 10, 30}),
            (std::vector<double>{1.5, 3, 1.5, 4}));
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               DegenerateInputError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2}, std::vector<double>{1, 2}), DegenerateInputError);
  EXPECT_THROW(spearman(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}),
               std::invalid_argument);
}

TEST(Spearman, InvariantUnderMonotoneTransformAndSymmetric) {
  Rng rng(21);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> x(10), y(10);
    for (auto& v : x) v = rng.normal();
    for (auto& v : y) v = rng.normal();
    const auto base = spearman(x, y);
    std::vector<double> fx;
    for (double v : x) fx.push_back(std::atan(v) * 3.0 + 1.0);
    EXPECT_NEAR(spearman(fx, y).rho, base.rho, 1e-12);
    EXPECT_EQ(spearman(y, x).rho, base.rho);
    EXPECT_GE(base.p_value, 0.0);
    EXPECT_LE(base.p_value, 1.0);
  }
}

TEST(Jackknife, IdenticalDistances) {
  const std::vector<std::string> units = {"a", "b", "c", "d", "e"};
  const std::vector<double> pos = {0.0, 1.0, 3.5, 4.0, 9.0};
  auto dist = [&](std::span<const std::size_t> s) { return testing::PlantedUnits::pairwise(pos, s); };
  const auto rep = jackknife_spearman(units, dist, dist);
  EXPECT_EQ(rep.rho_point, 1.0);
  EXPECT_EQ(rep.se_jack, 0.0);
  EXPECT_EQ(rep.leave_out_values.size(), 5u);
}

TEST(Jackknife, PlantedUnitIsMostInfluential) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto u = testing::planted_units(seed);
    const auto rep = jackknife_spearman(
        u.names, [&](auto s) { return u.dist_a(s); }, [&](auto s) { return u.dist_b(s); });
    ASSERT_EQ(rep.leave_out_values.size(), 14u);
    EXPECT_EQ(rep.most_influential(), u.planted) << seed;
    EXPECT_LE(rep.ci_lo, rep.rho_jack);
    EXPECT_GE(rep.ci_hi, rep.rho_jack);
  }
}

TEST(Jackknife, Errors) {
  const std::vector<std::string> units = {"a", "b", "c"};
  auto d = [](std::span<const std::size_t> s) { return std::vector<double>(s.size(), 1.0); };
  EXPECT_THROW(jackknife_spearman(units, d, d), DegenerateInputError);
}

TEST(BootstrapMean, ConstantAndDeterministic) {
  const std::vector<double> c(20, 3.25);
  const auto ci = bootstrap_mean_ci(c, 500, 3);
  EXPECT_EQ(ci.point, 3.25);
  EXPECT_EQ(ci.lo, 3.25);
  EXPECT_EQ(ci.hi, 3.25);

  Rng rng(1);
  std::vector<double> v(50);
  for (auto& x : v) x = rng.normal();
  const auto a = bootstrap_mean_ci(v, 1000, 8), b = bootstrap_mean_ci(v, 1000, 8);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
  EXPECT_THROW(bootstrap_mean_ci(std::vector<double>{1, 2}), DegenerateInputError);
  EXPECT_THROW(bootstrap_mean_ci(v, 99, 1), std::invalid_argument);
}

TEST(BootstrapMean, WidthMatchesNormalTheory) {
  Rng rng(2024);
  std::vector<double> v(1000);
  for (auto& x : v) x = rng.normal();
  const auto ci = bootstrap_mean_ci(v, 1000, 5);
  const double analytic = 2.0 * 1.96 / std::sqrt(1000.0);
  EXPECT_NEAR(ci.hi - ci.lo, analytic, 0.3 * analytic);
  EXPECT_LE(ci.lo, ci.point);
  EXPECT_GE(ci.hi, ci.point);
}

TEST(Quantile, TypeSeven) {
  const std::vector<double> s = {1, 2, 3, 4};
  EXPECT_EQ(quantile_sorted(s, 0.0), 1.0);
  EXPECT_EQ(quantile_sorted(s, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(quantile_sorted(s, 0.25), 1.75);
}

TEST(Condensed, UpperTriangleOfSubset) {
  const std::vector<std::vector<double>> m = {{0, 1, 2, 3}, {1, 0, 4, 5}, {2, 4, 0, 6}, {3, 5, 6, 0}};
  const std::vector<std::size_t> s = {0, 2, 3};
  EXPECT_EQ(condensed(m, s), (std::vector<double>{2, 3, 6}));
}

}  // namespace
}  // namespace mirlab
