#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>

#include "mirlab/rubato.hpp"

namespace mirlab {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sinusoid(std::size_t n, double period, double mean = 120.0, double amp = 10.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = mean + amp * std::sin(2.0 * kPi * double(t) / period);
  return x;
}

// Power exactly proportional to 1/k on bins 1..n/2-1 with random phases:
// strictly decreasing spectrum, so bin 1 is the only peak.
std::vector<double> inverse_k_curve(std::size_t n, double sigma, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n, 0.0);
  for (std::size_t k = 1; k < n / 2; ++k) {
    const double phase = 2.0 * kPi * rng.uniform();
    const double amp = 1.0 / std::sqrt(double(k));
    for (std::size_t t = 0; t < n; ++t) x[t] += amp * std::cos(2.0 * kPi * double(k * t) / double(n) + phase);
  }
  double ss = 0.0;
  for (double v : x) ss += v * v;
  const double scale = sigma / std::sqrt(ss / double(n));
  for (double& v : x) v = 120.0 + scale * v;
  return x;
}

std::vector<double> white_noise(std::size_t n, double sd, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = 120.0 + rng.normal(0.0, sd);
  return x;
}

// Straight-line transcription of the priority table.
RubatoCategory reference_classify(double s, double r) {
  if (s < 0.5) return RubatoCategory::metronomic;
  if (r > 0.5) return RubatoCategory::periodic;
  if (r > 0.3) return RubatoCategory::quasi_periodic;
  if (s > 3.0) return RubatoCategory::free;
  return RubatoCategory::metronomic;
}

TEST(PowerSpectrum, MatchesNaiveDft) {
  Rng rng(2);
  for (std::size_t n : {7u, 16u, 33u, 64u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal();
    const auto p = power_spectrum(x);
    ASSERT_EQ(p.size(), n / 2 + 1);
    for (std::size_t k = 0; k < p.size(); ++k) {
      std::complex<double> acc = 0.0;
      for (std::size_t t = 0; t < n; ++t) acc += x[t] * std::polar(1.0, -2.0 * kPi * double(k * t) / double(n));
      const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
      EXPECT_NEAR(p[k], (unpaired ? 1.0 : 2.0) * std::norm(acc) / double(n), 1e-9) << n << " " << k;
    }
  }
}

TEST(PowerSpectrum, Parseval) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 32 + rng.index(300);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.normal(0.0, 4.0);
    double mean = 0.0;
    for (double v : x) mean += v / double(n);
    double var = 0.0;
    for (auto& v : x) {
      v -= mean;
      var += v * v / double(n);
    }
    const auto p = power_spectrum(x);
    double non_dc = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) non_dc += p[k];
    EXPECT_NEAR(non_dc / double(n), var, 1e-6 * var);
  }
}

TEST(Rubato, ConstantCurveShortCircuits) {
  const auto a = rubato_spectral(TempoCurve(std::vector<double>(64, 120.0)));
  EXPECT_EQ(a.category, RubatoCategory::metronomic);
  EXPECT_EQ(a.sigma_bpm, 0.0);
  EXPECT_FALSE(a.periodicity_ratio.has_value());
  EXPECT_TRUE(a.dominant_periods.empty());
}

TEST(Rubato, SinusoidRecoversPeriod) {
  const auto a = rubato_spectral(TempoCurve(sinusoid(400, 20.0)));
  EXPECT_EQ(a.category, RubatoCategory::periodic);
  ASSERT_FALSE(a.dominant_periods.empty());
  EXPECT_EQ(a.dominant_periods[0].period_beats, 20.0);
  EXPECT_EQ(a.dominant_periods[0].power_norm, 1.0);
  EXPECT_GT(*a.periodicity_ratio, 0.99);
  EXPECT_NEAR(a.sigma_bpm, 10.0 / std::sqrt(2.0), 1e-9);

  for (double period : {8.0, 16.0, 32.0, 64.0}) {
    const auto b = rubato_spectral(TempoCurve(sinusoid(256, period)));
    EXPECT_EQ(b.dominant_periods.at(0).period_beats, period);
    EXPECT_EQ(b.category, RubatoCategory::periodic);
  }
}

TEST(Rubato, InverseKSpectrumIsFree) {
  const std::size_t n = 256;
  double harmonic = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) harmonic += 1.0 / double(k);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto a = rubato_spectral(TempoCurve(inverse_k_curve(n, 5.0, seed)));
    EXPECT_NEAR(a.sigma_bpm, 5.0, 1e-9);
    EXPECT_NEAR(*a.periodicity_ratio, 1.0 / harmonic, 1e-9);
    EXPECT_EQ(a.category, RubatoCategory::free);
    ASSERT_EQ(a.dominant_periods.size(), 1u);
    EXPECT_EQ(a.dominant_periods[0].period_beats, double(n));
  }
}

TEST(Rubato, WhiteNoiseSpreadsPowerOverManyPeaks) {
  // Roughly a third of white-noise bins are local maxima, and they carry
  // more than half of the power.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto a = rubato_spectral(TempoCurve(white_noise(256, 5.0, seed)));
    EXPECT_GT(*a.periodicity_ratio, 0.5);
    EXPECT_EQ(a.category, RubatoCategory::periodic);
  }
}

TEST(Rubato, MeanInvariance) {
  Rng rng(17);
  for (int t = 0; t < 30; ++t) {
    auto x = white_noise(100, 3.0, 100 + t);
    const auto a = rubato_spectral(TempoCurve(x));
    for (auto& v : x) v += 37.5;
    const auto b = rubato_spectral(TempoCurve(x));
    EXPECT_NEAR(*a.periodicity_ratio, *b.periodicity_ratio, 1e-9);
    ASSERT_EQ(a.dominant_periods.size(), b.dominant_periods.size());
    for (std::size_t i = 0; i < a.dominant_periods.size(); ++i) {
      EXPECT_EQ(a.dominant_periods[i].period_beats, b.dominant_periods[i].period_beats);
    }
    EXPECT_GE(*a.periodicity_ratio, 0.0);
    EXPECT_LE(*a.periodicity_ratio, 1.0);
  }
}

TEST(Rubato, Errors) {
  EXPECT_THROW(rubato_spectral(TempoCurve(std::vector<double>(31, 120.0))), ExcludedCurveError);
  EXPECT_THROW(TempoCurve({120.0, 0.0, 119.0}), std::invalid_argument);
  EXPECT_THROW(TempoCurve({}), DegenerateInputError);
  ClassifierThresholds bad;
  bad.quasi_ratio = 0.6;
  EXPECT_THROW(rubato_spectral(TempoCurve(sinusoid(64, 8)), bad), std::invalid_argument);
}

TEST(Classifier, PriorityTwoBeatsPriorityFour) {
  EXPECT_EQ(classify(5.0, 0.6, {}), RubatoCategory::periodic);
  EXPECT_EQ(classify(5.0, 0.2, {}), RubatoCategory::free);
  EXPECT_EQ(classify(2.0, 0.2, {}), RubatoCategory::metronomic);
  EXPECT_EQ(classify(0.4, 0.9, {}), RubatoCategory::metronomic);
  EXPECT_EQ(classify(2.0, 0.4, {}), RubatoCategory::quasi_periodic);
}

TEST(Classifier, GridMatchesReference) {
  for (int si = 0; si <= 1000; ++si) {
    for (int ri = 0; ri <= 100; ++ri) {
      const double s = si / 100.0, r = ri / 100.0;
      ASSERT_EQ(classify(s, r, {}), reference_classify(s, r)) << s << " " << r;
    }
  }
}

std::vector<LabeledCurve> mixed_corpus() {
  std::vector<LabeledCurve> c;
  c.push_back({"A", "a-sine", TempoCurve(sinusoid(128, 16))});
  c.push_back({"A", "a-flat", TempoCurve(std::vector<double>(64, 100.0))});
  c.push_back({"B", "b-free", TempoCurve(inverse_k_curve(256, 5.0, 9))});
  c.push_back({"B", "b-short", TempoCurve(std::vector<double>(10, 90.0))});
  c.push_back({"C", "c-sine", TempoCurve(sinusoid(256, 32, 110, 2))});
  return c;
}

TEST(Corpus, TableMatchesPerCurveClassification) {
  const auto corpus = mixed_corpus();
  const auto cls = classify_corpus(corpus);
  EXPECT_EQ(cls.labels, (std::vector<std::string>{"A", "B", "C"}));
  ASSERT_EQ(cls.excluded.size(), 1u);
  EXPECT_EQ(cls.excluded[0].id, "b-short");
  ASSERT_EQ(cls.curves.size(), 4u);
  std::size_t total = 0;
  for (const auto& row : cls.table) for (auto c : row) total += c;
  EXPECT_EQ(total, 4u);
  for (const auto& cr : cls.curves) {
    for (const auto& lc : corpus) {
      if (lc.id == cr.id) {
        EXPECT_EQ(cr.analysis.category, rubato_spectral(lc.curve).category);
      }
    }
  }
  EXPECT_EQ(cls.table[0], (std::array<std::size_t, 4>{1, 0, 0, 1}));
  EXPECT_EQ(cls.table[1], (std::array<std::size_t, 4>{0, 1, 0, 0}));
  EXPECT_EQ(cls.table[2], (std::array<std::size_t, 4>{0, 0, 0, 1}));

  const auto single = classify_corpus({{"P", "p", TempoCurve(sinusoid(64, 8))}});
  EXPECT_EQ(single.table[0], (std::array<std::size_t, 4>{0, 0, 0, 1}));
  EXPECT_THROW(classify_corpus({{"P", "p", TempoCurve(std::vector<double>(5, 90.0))}}),
               DegenerateInputError);
}

TEST(Sensitivity, SeventeenRunsSharingRatios) {
  const auto corpus = mixed_corpus();
  const auto runs = threshold_sensitivity(corpus);
  ASSERT_EQ(runs.size(), 17u);
  EXPECT_EQ(runs[0].name, "baseline");
  EXPECT_EQ(runs[1].name, "metronomic_sigma x0.8");
  EXPECT_EQ(runs[16].name, "periodic_ratio x1.2");
  const auto base = classify_corpus(corpus);
  EXPECT_EQ(runs[0].classification.table, base.table);
  for (const auto& r : runs) {
    ASSERT_EQ(r.periodicity_ratios.size(), runs[0].periodicity_ratios.size());
    for (std::size_t i = 0; i < r.periodicity_ratios.size(); ++i) {
      EXPECT_EQ(r.periodicity_ratios[i].has_value(), runs[0].periodicity_ratios[i].has_value());
      if (r.periodicity_ratios[i]) {
        EXPECT_EQ(*r.periodicity_ratios[i], *runs[0].periodicity_ratios[i]);
      }
    }
    if (r.axis == "periodic_ratio") {
      // The flat curve stays a sigma short-circuit whatever the ratio threshold.
      EXPECT_EQ(r.classification.curves[1].analysis.category, RubatoCategory::metronomic);
      EXPECT_FALSE(r.classification.curves[1].analysis.periodicity_ratio.has_value());
    }
  }
}

TEST(PairedDelta, ConstantDeltas) {
  std::vector<std::pair<double, double>> zero = {{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  const auto z = paired_delta_ci(zero, 1000, 1);
  EXPECT_EQ(z.point, 0.0);
  EXPECT_EQ(z.lo, 0.0);
  EXPECT_EQ(z.hi, 0.0);
  std::vector<std::pair<double, double>> minus2 = {{5, 3}, {7, 5}, {1, -1}, {0, -2}, {9, 7}};
  const auto m = paired_delta_ci(minus2, 1000, 1);
  EXPECT_EQ(m.point, -2.0);
  EXPECT_EQ(m.lo, -2.0);
  EXPECT_EQ(m.hi, -2.0);
  EXPECT_THROW(paired_delta_ci(std::vector<std::pair<double, double>>{{1, 2}, {2, 3}}),
               DegenerateInputError);
}

TEST(PairedDelta, CoverageOfKnownShift) {
  int covered = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Rng rng(5000 + trial);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 40; ++i) {
      const double before = rng.normal(0.4, 0.1);
      pairs.emplace_back(before, before + 0.05 + rng.normal(0.0, 0.05));
    }
    const auto ci = paired_delta_ci(pairs, 1000, trial);
    if (ci.lo <= 0.05 && 0.05 <= ci.hi) ++covered;
  }
  EXPECT_GE(covered, 90);
}

}  // namespace
}  // namespace mirlab
