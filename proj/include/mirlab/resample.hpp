#pragma once

// Rank correlation and resampling: Spearman's rho, percentile bootstrap,
// and leave-one-unit-out jackknife over grouped units.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "mirlab/error.hpp"
#include "mirlab/rng.hpp"

namespace mirlab {

struct Interval {
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct SpearmanResult {
  double rho = 0.0;
  double p_value = 1.0;
};

struct JackknifeReport {
  double rho_point = 0.0;
  double p_point = 1.0;
  double rho_jack = 0.0;
  double se_jack = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::vector<std::pair<std::string, double>> leave_out_values;

  // Unit whose removal moves rho furthest from rho_point.
  std::size_t most_influential() const {
    std::size_t best = 0;
    double best_shift = -1.0;
    for (std::size_t i = 0; i < leave_out_values.size(); ++i) {
      const double shift = std::abs(leave_out_values[i].second - rho_point);
      if (shift > best_shift) {
        best_shift = shift;
        best = i;
      }
    }
    return best;
  }
};

/// Quantile of an ascending-sorted sample by linear interpolation between
/// order statistics (Hyndman-Fan type 7).
inline double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw DegenerateInputError("quantile of an empty sample");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

// Central 95% percentile interval of a replicate sample (sorted in place).
inline std::pair<double, double> percentile_95(std::vector<double>& replicates) {
  std::sort(replicates.begin(), replicates.end());
  return {quantile_sorted(replicates, 0.025), quantile_sorted(replicates, 0.975)};
}

/// Percentile bootstrap over `n_units` resampling units.
///
/// For replicate b, `statistic` receives a vector of `n_units` indices drawn
/// with replacement from substream b of `seed`, and returns one value. The
/// returned replicate values are in replicate order.
template <class Statistic>
std::vector<double> bootstrap_replicates(std::size_t n_units, std::size_t replicates,
                                         std::uint64_t seed, Statistic&& statistic) {
  std::vector<double> out;
  out.reserve(replicates);
  std::vector<std::size_t> draw(n_units);
  for (std::size_t b = 0; b < replicates; ++b) {
    Rng rng = Rng::substream(seed, b);
    for (auto& idx : draw) idx = static_cast<std::size_t>(rng.index(n_units));
    out.push_back(statistic(std::span<const std::size_t>(draw)));
  }
  return out;
}

inline void require_replicates(std::size_t replicates) {
  if (replicates < 100) {
    throw std::invalid_argument("bootstrap needs at least 100 replicates, got " +
                                std::to_string(replicates));
  }
}

inline double mean_of(std::span<const double> values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

inline Interval bootstrap_mean_ci(std::span<const double> values,
                                  std::size_t replicates = 1000,
                                  std::uint64_t seed = Rng::kDefaultSeed) {
  if (values.size() < 3) {
    throw DegenerateInputError("bootstrap_mean_ci needs at least 3 values, got " +
                               std::to_string(values.size()));
  }
  require_replicates(replicates);
  auto reps = bootstrap_replicates(values.size(), replicates, seed,
                                   [&](std::span<const std::size_t> idx) {
                                     double s = 0.0;
                                     for (auto i : idx) s += values[i];
                                     return s / static_cast<double>(idx.size());
                                   });
  const auto [lo, hi] = percentile_95(reps);
  return {mean_of(values), lo, hi};
}

/// Ranks starting at 1; tied values share the average of their ranks.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw DegenerateInputError("correlation undefined: one argument is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// Spearman rank correlation with average-rank ties. The two-sided p-value
/// uses the t approximation t = rho * sqrt((n-2)/(1-rho^2)) with n-2 degrees
/// of freedom.
inline SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("spearman: length mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) {
    throw DegenerateInputError("spearman needs at least 3 observations, got " +
                               std::to_string(x.size()));
  }
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  SpearmanResult out;
  out.rho = pearson(rx, ry);
  const double df = static_cast<double>(x.size()) - 2.0;
  const double denom = 1.0 - out.rho * out.rho;
  if (denom <= 0.0) {
    out.p_value = 0.0;
  } else {
    const double t = out.rho * std::sqrt(df / denom);
    boost::math::students_t_distribution<double> dist(df);
    out.p_value = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
  }
  return out;
}

/// Leave-one-unit-out jackknife of the Spearman correlation between two
/// families of pairwise distances.
///
/// `distances_a(subset)` and `distances_b(subset)` receive the indices of the
/// units still in play and must return condensed distances over the
/// unordered pairs of that subset, both in the same pair order. The functions
/// are re-evaluated on every leave-out so that quantities depending on the
/// whole unit set (standardisation, for instance) are recomputed.
///
/// rho_jack is the mean of the leave-out values; se_jack is
/// sqrt((n-1)/n * sum (rho_(-i) - rho_jack)^2); the 95% interval is
/// rho_jack +/- 1.96 se_jack and is not clamped to [-1, 1].
template <class DistancesA, class DistancesB>
JackknifeReport jackknife_spearman(std::span<const std::string> units,
                                   DistancesA&& distances_a, DistancesB&& distances_b) {
  const std::size_t n = units.size();
  if (n < 4) {
    throw DegenerateInputError("jackknife needs at least 4 units, got " + std::to_string(n));
  }
  auto correlate = [&](const std::vector<std::size_t>& subset) {
    const std::vector<double> a = distances_a(std::span<const std::size_t>(subset));
    const std::vector<double> b = distances_b(std::span<const std::size_t>(subset));
    return spearman(a, b);
  };

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  JackknifeReport report;
  const auto point = correlate(all);
  report.rho_point = point.rho;
  report.p_point = point.p_value;

  std::vector<double> leave_out;
  leave_out.reserve(n);
  for (std::size_t skip = 0; skip < n; ++skip) {
    std::vector<std::size_t> subset;
    subset.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (i != skip) subset.push_back(i);
    }
    double rho = 0.0;
    try {
      rho = correlate(subset).rho;
    } catch (const DegenerateInputError& e) {
      throw DegenerateInputError("jackknife leave-out '" + units[skip] + "': " + e.what());
    }
    leave_out.push_back(rho);
    report.leave_out_values.emplace_back(units[skip], rho);
  }

  report.rho_jack = mean_of(leave_out);
  double ss = 0.0;
  for (double r : leave_out) ss += (r - report.rho_jack) * (r - report.rho_jack);
  const double nd = static_cast<double>(n);
  report.se_jack = std::sqrt((nd - 1.0) / nd * ss);
  report.ci_lo = report.rho_jack - 1.96 * report.se_jack;
  report.ci_hi = report.rho_jack + 1.96 * report.se_jack;
  return report;
}

// Condensed (upper-triangle, row-major) view of a square matrix restricted to
// the given subset of rows/columns.
template <class Matrix>
std::vector<double> condensed(const Matrix& m, std::span<const std::size_t> subset) {
  std::vector<double> out;
  out.reserve(subset.size() * (subset.size() - 1) / 2);
  for (std::size_t i = 0; i < subset.size(); ++i) {
    for (std::size_t j = i + 1; j < subset.size(); ++j) {
      out.push_back(m[subset[i]][subset[j]]);
    }
  }
  return out;
}

}  // namespace mirlab
