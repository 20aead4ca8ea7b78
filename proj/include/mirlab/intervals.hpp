#pragma once

// Exponential / Laplace fits to melodic-interval distributions with
// log-likelihood and Kolmogorov-Smirnov goodness of fit.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mirlab/error.hpp"
#include "mirlab/resample.hpp"

namespace mirlab {

inline constexpr std::size_t kMinIntervals = 20;

enum class IntervalFamily { exponential, laplace };

inline std::string_view to_string(IntervalFamily f) {
  return f == IntervalFamily::exponential ? "exponential" : "laplace";
}

struct IntervalAnalysis {
  IntervalFamily family = IntervalFamily::laplace;
  std::optional<double> rate;      // exponential
  std::optional<double> location;  // laplace
  std::optional<double> scale;     // laplace
  double log_likelihood = 0.0;     // selected family, natural log, summed
  double mean_log_likelihood_exponential = 0.0;
  double mean_log_likelihood_laplace = 0.0;
  double ks_distance = 0.0;
  std::size_t n = 0;
};

template <class Int>
std::vector<Int> intervals_from_sequence(std::span<const Int> encoded) {
  if (encoded.size() < 2) {
    throw DegenerateInputError("interval extraction needs at least 2 items, got " +
                               std::to_string(encoded.size()));
  }
  std::vector<Int> out;
  out.reserve(encoded.size() - 1);
  for (std::size_t i = 0; i + 1 < encoded.size(); ++i) out.push_back(encoded[i + 1] - encoded[i]);
  return out;
}

namespace detail {

// Median with the two middle order statistics averaged for even n.
// Reorders `v`.
inline double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

struct LaplaceParams {
  double location = 0.0;
  double scale = 0.0;
};

inline LaplaceParams fit_laplace(std::span<const double> x) {
  std::vector<double> work(x.begin(), x.end());
  LaplaceParams p;
  p.location = median_inplace(work);
  double dev = 0.0;
  for (double v : x) dev += std::abs(v - p.location);
  p.scale = dev / static_cast<double>(x.size());
  return p;
}

struct ExponentialFit {
  double rate = 0.0;
  std::size_t nonzero = 0;
  bool both_signs = false;
};

// Rate = 1 / mean |x| over the nonzero values.
inline ExponentialFit fit_exponential(std::span<const double> x) {
  ExponentialFit f;
  double sum = 0.0;
  bool pos = false, neg = false;
  for (double v : x) {
    if (v == 0.0) continue;
    sum += std::abs(v);
    ++f.nonzero;
    (v > 0 ? pos : neg) = true;
  }
  f.both_signs = pos && neg;
  f.rate = f.nonzero > 0 ? static_cast<double>(f.nonzero) / sum : 0.0;
  return f;
}

inline double laplace_cdf(double x, double mu, double b) {
  return x < mu ? 0.5 * std::exp((x - mu) / b) : 1.0 - 0.5 * std::exp(-(x - mu) / b);
}

template <class Cdf>
double ks_statistic(std::vector<double> sample, Cdf&& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::clamp(d, 0.0, 1.0);
}

inline void validate_intervals(std::span<const double> x) {
  if (x.size() < kMinIntervals) {
    throw DegenerateInputError("interval analysis needs at least " + std::to_string(kMinIntervals) +
                               " intervals, got " + std::to_string(x.size()));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("intervals must be finite");
  }
  if (std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; })) {
    throw DegenerateInputError("all intervals are identical; no distribution to fit");
  }
}

}  // namespace detail

/// Fits both families and keeps the one with the higher mean log-likelihood
/// per modelled sample, both read as densities on the signed intervals.
///
/// Laplace(mu, b): mu = median, b = mean |x - mu|, over all intervals.
/// Exponential(rate): rate = 1 / mean |x| over the nonzero intervals (zeros
/// lie outside its support). Its signed reading is a one-sided exponential
/// when the nonzero intervals share a sign, and rate/2 * exp(-rate |x|) when
/// both signs occur. Ties go to Laplace. The KS distance is taken against
/// the selected family on the sample it models (|x| for the exponential).
inline IntervalAnalysis interval_analysis(std::span<const double> intervals) {
  detail::validate_intervals(intervals);
  IntervalAnalysis out;
  out.n = intervals.size();

  const auto lap = detail::fit_laplace(intervals);
  const auto ex = detail::fit_exponential(intervals);
  out.mean_log_likelihood_laplace =
      lap.scale > 0.0 ? -std::log(2.0 * lap.scale) - 1.0 : -INFINITY;
  out.mean_log_likelihood_exponential =
      ex.nonzero > 0 ? std::log(ex.rate) - 1.0 - (ex.both_signs ? std::numbers::ln2 : 0.0)
                     : -INFINITY;

  if (out.mean_log_likelihood_exponential > out.mean_log_likelihood_laplace) {
    out.family = IntervalFamily::exponential;
    out.rate = ex.rate;
    out.log_likelihood = out.mean_log_likelihood_exponential * static_cast<double>(ex.nonzero);
    std::vector<double> mags;
    mags.reserve(ex.nonzero);
    for (double v : intervals) {
      if (v != 0.0) mags.push_back(std::abs(v));
    }
    const double rate = ex.rate;
    out.ks_distance =
        detail::ks_statistic(std::move(mags), [rate](double x) { return 1.0 - std::exp(-rate * x); });
  } else {
    out.family = IntervalFamily::laplace;
    out.location = lap.location;
    out.scale = lap.scale;
    out.log_likelihood = out.mean_log_likelihood_laplace * static_cast<double>(intervals.size());
    out.ks_distance = detail::ks_statistic(
        std::vector<double>(intervals.begin(), intervals.end()),
        [&](double x) { return detail::laplace_cdf(x, lap.location, lap.scale); });
  }
  return out;
}

struct ParameterInterval {
  std::string name;
  double point = 0.0;
  double lo = 0.0;
  double hi = 0.0;
};

struct IntervalBootstrap {
  IntervalFamily family = IntervalFamily::laplace;
  std::vector<ParameterInterval> parameters;
};

/// Percentile 95% intervals for the parameters of the family selected on
/// the full sample; each replicate refits that family (no reselection).
inline IntervalBootstrap interval_param_bootstrap(std::span<const double> intervals,
                                                  std::size_t replicates = 1000,
                                                  std::uint64_t seed = Rng::kDefaultSeed) {
  const auto fit = interval_analysis(intervals);
  require_replicates(replicates);
  IntervalBootstrap out;
  out.family = fit.family;
  std::vector<double> resample(intervals.size());

  if (fit.family == IntervalFamily::exponential) {
    auto reps = bootstrap_replicates(intervals.size(), replicates, seed,
                                     [&](std::span<const std::size_t> idx) {
                                       for (std::size_t i = 0; i < idx.size(); ++i) {
                                         resample[i] = intervals[idx[i]];
                                       }
                                       return detail::fit_exponential(resample).rate;
                                     });
    const auto [lo, hi] = percentile_95(reps);
    out.parameters.push_back({"rate", *fit.rate, lo, hi});
    return out;
  }

  std::vector<double> locations, scales;
  locations.reserve(replicates);
  scales.reserve(replicates);
  bootstrap_replicates(intervals.size(), replicates, seed, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < idx.size(); ++i) resample[i] = intervals[idx[i]];
    const auto p = detail::fit_laplace(resample);
    locations.push_back(p.location);
    scales.push_back(p.scale);
    return 0.0;
  });
  const auto [llo, lhi] = percentile_95(locations);
  const auto [slo, shi] = percentile_95(scales);
  out.parameters.push_back({"location", *fit.location, llo, lhi});
  out.parameters.push_back({"scale", *fit.scale, slo, shi});
  return out;
}

}  // namespace mirlab
