#pragma once

// Chi-squared stationarity of symbol profiles across segments, and the
// Higuchi fractal dimension of a real series.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "mirlab/distributions.hpp"
#include "mirlab/error.hpp"

namespace mirlab {

inline constexpr std::size_t kDefaultSegments = 4;

struct StationarityResult {
  double chi2 = 0.0;
  double p_value = 1.0;
  double cramers_v = 0.0;
  std::size_t n_segments = 0;
  std::size_t df = 0;
  std::size_t n_categories_used = 0;
  std::size_t total_count = 0;
  bool low_expected_count = false;  // some expected cell < 5
};

// Upper tail of the chi-squared distribution.
inline double chi2_survival(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

/// Pearson chi-squared test of independence between segment and symbol.
///
/// The sequence is cut into `n_segments` contiguous pieces of length
/// floor(len / n_segments), the remainder going to the last piece. Symbols
/// that never occur are dropped from the table. No continuity correction.
inline StationarityResult stationarity_test(const SymbolSequence& seq, const Alphabet& alphabet,
                                            std::size_t n_segments = kDefaultSegments,
                                            bool collapse = false) {
  if (n_segments < 2) throw std::invalid_argument("stationarity test needs at least 2 segments");
  if (seq.empty()) throw DegenerateInputError("stationarity test on an empty sequence");
  const SymbolSequence work = collapse ? collapse_duplicates(seq) : seq;
  const std::size_t len = work.size();
  const std::size_t seg_len = len / n_segments;
  if (seg_len == 0) {
    throw DegenerateInputError("sequence of length " + std::to_string(len) +
                               " is too short for " + std::to_string(n_segments) + " segments");
  }
  const auto idx = encode(work, alphabet);
  const std::size_t n_sym = alphabet.size();
  std::vector<std::vector<double>> table(n_segments, std::vector<double>(n_sym, 0.0));
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t seg = std::min(i / seg_len, n_segments - 1);
    table[seg][idx[i]] += 1.0;
  }

  std::vector<double> col(n_sym, 0.0);
  for (const auto& row : table) {
    for (std::size_t c = 0; c < n_sym; ++c) col[c] += row[c];
  }
  std::vector<std::size_t> used;
  for (std::size_t c = 0; c < n_sym; ++c) {
    if (col[c] > 0.0) used.push_back(c);
  }
  if (used.size() < 2) {
    throw DegenerateInputError("stationarity test needs at least 2 distinct symbols, got " +
                               std::to_string(used.size()));
  }

  const double total = static_cast<double>(len);
  StationarityResult r;
  r.n_segments = n_segments;
  r.n_categories_used = used.size();
  r.total_count = len;
  r.df = (n_segments - 1) * (used.size() - 1);
  for (const auto& row : table) {
    double row_sum = 0.0;
    for (double x : row) row_sum += x;
    for (std::size_t c : used) {
      const double expected = row_sum * col[c] / total;
      if (expected < 5.0) r.low_expected_count = true;
      const double diff = row[c] - expected;
      r.chi2 += diff * diff / expected;
    }
  }
  r.p_value = chi2_survival(r.chi2, static_cast<double>(r.df));
  const double k = static_cast<double>(std::min(n_segments, used.size()) - 1);
  r.cramers_v = std::min(1.0, std::sqrt(r.chi2 / (total * k)));
  return r;
}

struct FractalDimension {
  double d = 0.0;
  double r_squared = 0.0;
  std::size_t k_max = 0;
  std::vector<double> curve_length;  // L(k) for k = 1..k_max
};

inline std::size_t default_k_max(std::size_t n) { return std::min<std::size_t>(16, n / 4); }

/// Higuchi (1988) fractal dimension.
///
/// For k = 1..k_max and offsets m = 1..k (1-based),
///   L_m(k) = (N - 1) / (floor((N - m) / k) * k^2) * sum_i |x[m + ik] - x[m + (i-1)k]|,
/// L(k) is the mean over m, and d is the OLS slope of ln L(k) on ln(1/k).
inline FractalDimension higuchi_fractal_dimension(std::span<const double> x, std::size_t k_max) {
  const std::size_t n = x.size();
  if (k_max < 2) throw std::invalid_argument("higuchi k_max must be at least 2");
  if (n < 4 * k_max) {
    throw DegenerateInputError("series of length " + std::to_string(n) +
                               " is too short for k_max = " + std::to_string(k_max) +
                               " (need 4 * k_max)");
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    throw DegenerateInputError("zero curve length: the series is constant");
  }

  FractalDimension fd;
  fd.k_max = k_max;
  std::vector<double> lx, ly;
  for (std::size_t k = 1; k <= k_max; ++k) {
    double sum_l = 0.0;
    for (std::size_t m = 1; m <= k; ++m) {
      const std::size_t steps = (n - m) / k;
      double length = 0.0;
      for (std::size_t i = 1; i <= steps; ++i) {
        length += std::abs(x[m - 1 + i * k] - x[m - 1 + (i - 1) * k]);
      }
      const double kd = static_cast<double>(k);
      sum_l += length * static_cast<double>(n - 1) / (static_cast<double>(steps) * kd * kd);
    }
    const double lk = sum_l / static_cast<double>(k);
    if (!(lk > 0.0)) throw DegenerateInputError("zero curve length at scale k = " + std::to_string(k));
    fd.curve_length.push_back(lk);
    lx.push_back(std::log(1.0 / static_cast<double>(k)));
    ly.push_back(std::log(lk));
  }

  const double kn = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= kn;
  my /= kn;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fd.d = sxy / sxx;
  fd.r_squared = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fd;
}

inline FractalDimension higuchi_fractal_dimension(std::span<const double> x) {
  return higuchi_fractal_dimension(x, default_k_max(x.size()));
}

}  // namespace mirlab
