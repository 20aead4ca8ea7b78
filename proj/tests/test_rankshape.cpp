#include <gtest/gtest.h>

#include <cmath>

#include "mirlab/rankshape.hpp"
#include "mirlab/rng.hpp"

namespace mirlab {
namespace {

// Definition-level oracle: sum_ij |x_i - x_j| / (2 n sum x).
double gini_pairwise(const std::vector<double>& x) {
  double num = 0.0, sum = 0.0;
  for (double a : x) {
    sum += a;
    for (double b : x) num += std::abs(a - b);
  }
  return num / (2.0 * double(x.size()) * sum);
}

std::vector<double> power_law(std::size_t ranks, double exponent) {
  std::vector<double> f;
  for (std::size_t r = 1; r <= ranks; ++r) f.push_back(1.0 / std::pow(double(r), exponent));
  return f;
}

TEST(Zipf, RecoversExponents) {
  const auto one = zipf_fit(power_law(50, 1.0));
  EXPECT_NEAR(one.alpha, 1.0, 1e-9);
  EXPECT_GE(one.r_squared, 1.0 - 1e-12);
  EXPECT_EQ(one.n_ranks, 50u);

  const auto two = zipf_fit(power_law(50, 2.0));
  EXPECT_NEAR(two.alpha, 2.0, 1e-9);

  const std::vector<double> flat(10, 3.0);
  const auto f = zipf_fit(flat);
  EXPECT_EQ(f.alpha, 0.0);
  EXPECT_EQ(f.r_squared, 1.0);
}

TEST(Zipf, SortsAndDropsZeros) {
  std::vector<double> f = {0.0, 1.0 / 3, 1.0, 0.0, 0.5, 0.25};
  const auto fit = zipf_fit(f);
  EXPECT_EQ(fit.n_ranks, 4u);
  EXPECT_NEAR(fit.alpha, 1.0, 1e-12);
}

TEST(Zipf, Errors) {
  EXPECT_THROW(zipf_fit(std::vector<double>{1.0, 0.5}), DegenerateInputError);
  EXPECT_THROW(zipf_fit(std::vector<double>{1.0, 0.5, 0.0, 0.0}), DegenerateInputError);
  EXPECT_THROW(zipf_fit(std::vector<double>{1.0, -0.5, 0.2}), std::invalid_argument);
}

TEST(Zipf, ScaleFree) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> f(12);
    for (auto& x : f) x = 0.01 + rng.uniform();
    const auto a = zipf_fit(f);
    const double c = 0.001 + 100.0 * rng.uniform();
    for (auto& x : f) x *= c;
    const auto b = zipf_fit(f);
    EXPECT_NEAR(a.alpha, b.alpha, 1e-9);
    EXPECT_NEAR(a.r_squared, b.r_squared, 1e-9);
    EXPECT_GE(a.r_squared, 0.0);
    EXPECT_LE(a.r_squared, 1.0);
  }
}

TEST(Gini, Anchors) {
  EXPECT_EQ(gini(std::vector<double>(7, 0.3)), 0.0);
  EXPECT_EQ(gini(std::vector<double>{0, 1, 0, 0}), 0.75);
  // |1-3| * 2 / (2 * 2 * 4)
  EXPECT_EQ(gini(std::vector<double>{1, 3}), 0.25);
  for (int n = 2; n <= 100; ++n) {
    std::vector<double> onehot(n, 0.0);
    onehot[n / 2] = 1.0;
    EXPECT_EQ(gini(onehot), double(n - 1) / double(n)) << n;
  }
}

TEST(Gini, Errors) {
  EXPECT_THROW(gini(std::vector<double>{0, 0, 0}), DegenerateInputError);
  EXPECT_THROW(gini(std::vector<double>{5}), DegenerateInputError);
  EXPECT_THROW(gini(std::vector<double>{1, -1}), std::invalid_argument);
}

TEST(Gini, MatchesPairwiseDefinitionAndIsScaleInvariant) {
  Rng rng(8);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(2 + rng.index(30));
    for (auto& v : x) v = rng.uniform() < 0.2 ? 0.0 : rng.exponential(1.0);
    x[0] += 0.1;
    const double g = gini(x);
    EXPECT_NEAR(g, gini_pairwise(x), 1e-12);
    EXPECT_GE(g, 0.0);
    EXPECT_LT(g, 1.0);
    const double c = 0.01 + 50.0 * rng.uniform();
    std::vector<double> y = x;
    for (auto& v : y) v *= c;
    EXPECT_NEAR(gini(y), g, 1e-12);
  }
}

TEST(Gini, TransferPrinciple) {
  Rng rng(15);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> x(3 + rng.index(10));
    for (auto& v : x) v = rng.exponential(1.0);
    std::size_t hi = 0, lo = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] > x[hi]) hi = i;
      if (x[i] < x[lo]) lo = i;
    }
    if (hi == lo) continue;
    // Move mass from the largest to the smallest without reversing their order.
    const double amount = 0.5 * (x[hi] - x[lo]) * rng.uniform();
    std::vector<double> y = x;
    y[hi] -= amount;
    y[lo] += amount;
    EXPECT_LE(gini_pairwise(y), gini_pairwise(x) + 1e-12);
    EXPECT_LE(gini(y), gini(x) + 1e-12);
  }
}

TEST(GiniMulti, PerColumn) {
  const std::vector<std::string> labels = {"harmonic", "dynamic", "rhythmic"};
  const std::vector<std::vector<double>> rows = {{1, 1, 10}, {2, 2, 0}, {3, 3, 5}, {4, 4, 1}};
  const auto rep = gini_multi(labels, rows);
  ASSERT_EQ(rep.per_dimension.size(), 3u);
  EXPECT_EQ(*rep.per_dimension[0].gini, *rep.per_dimension[1].gini);
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r[c]);
    EXPECT_EQ(rep.per_dimension[c].label, labels[c]);
    EXPECT_EQ(*rep.per_dimension[c].gini, gini(col));
  }

  auto scaled = rows;
  for (auto& r : scaled) r[2] *= 10;
  EXPECT_NEAR(*gini_multi(labels, scaled).per_dimension[2].gini, *rep.per_dimension[2].gini, 1e-15);
}

TEST(GiniMulti, ZeroColumnIsolated) {
  const auto rep = gini_multi({"a", "b"}, {{0, 1}, {0, 2}});
  EXPECT_FALSE(rep.per_dimension[0].gini.has_value());
  EXPECT_FALSE(rep.per_dimension[0].error.empty());
  EXPECT_TRUE(rep.per_dimension[1].gini.has_value());
  EXPECT_THROW(gini_multi({"a", "a"}, {{1, 1}, {2, 2}}), std::invalid_argument);
  EXPECT_THROW(gini_multi({"a"}, {{1}}), DegenerateInputError);
}

}  // namespace
}  // namespace mirlab
