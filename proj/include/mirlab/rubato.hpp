#pragma once

// Spectral decomposition of per-beat tempo curves and the four-way rubato
// classifier, with corpus-level tables, threshold sweeps and paired deltas.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "mirlab/error.hpp"
#include "mirlab/resample.hpp"
#include "mirlab/spectrum.hpp"

namespace mirlab {

inline constexpr std::size_t kDefaultMinSamples = 32;
inline constexpr double kPeakFloor = 0.1;  // fraction of the largest non-DC power
inline constexpr std::size_t kReportedPeriods = 3;

enum class RubatoCategory { metronomic, free, quasi_periodic, periodic };

inline constexpr std::array<RubatoCategory, 4> kRubatoCategories = {
    RubatoCategory::metronomic, RubatoCategory::free, RubatoCategory::quasi_periodic,
    RubatoCategory::periodic};

inline std::string_view to_string(RubatoCategory c) {
  switch (c) {
    case RubatoCategory::metronomic: return "metronomic";
    case RubatoCategory::free: return "free";
    case RubatoCategory::quasi_periodic: return "quasi_periodic";
    case RubatoCategory::periodic: return "periodic";
  }
  return "unknown";
}

struct ClassifierThresholds {
  double metronomic_sigma = 0.5;  // BPM
  double free_sigma = 3.0;        // BPM
  double quasi_ratio = 0.3;
  double periodic_ratio = 0.5;

  void validate() const {
    if (!(metronomic_sigma > 0.0 && metronomic_sigma < free_sigma)) {
      throw std::invalid_argument("thresholds need 0 < metronomic_sigma < free_sigma");
    }
    if (!(quasi_ratio > 0.0 && quasi_ratio < periodic_ratio && periodic_ratio < 1.0)) {
      throw std::invalid_argument("thresholds need 0 < quasi_ratio < periodic_ratio < 1");
    }
  }
};

class TempoCurve {
 public:
  explicit TempoCurve(std::vector<double> bpm) : bpm_(std::move(bpm)) {
    if (bpm_.empty()) throw DegenerateInputError("tempo curve is empty");
    for (std::size_t i = 0; i < bpm_.size(); ++i) {
      if (!(bpm_[i] > 0.0) || !std::isfinite(bpm_[i])) {
        throw std::invalid_argument("tempo curve sample " + std::to_string(i) +
                                    " is not a positive BPM value");
      }
    }
  }
  const std::vector<double>& bpm() const { return bpm_; }
  std::size_t size() const { return bpm_.size(); }

 private:
  std::vector<double> bpm_;
};

struct DominantPeriod {
  double period_beats = 0.0;
  double power_norm = 0.0;  // peak power / largest non-DC power
};

// Everything about a curve that does not depend on the thresholds.
struct SpectralProfile {
  std::size_t n_samples = 0;
  double mean_bpm = 0.0;
  double sigma_bpm = 0.0;                      // population standard deviation
  std::optional<double> periodicity_ratio;     // absent for a constant curve
  std::vector<DominantPeriod> dominant_periods;
};

struct RubatoAnalysis {
  RubatoCategory category = RubatoCategory::metronomic;
  double sigma_bpm = 0.0;
  std::optional<double> periodicity_ratio;  // absent on the short-circuit path
  std::vector<DominantPeriod> dominant_periods;
};

/// Priority table; the first rule that fires decides.
///   1. sigma < metronomic_sigma        -> metronomic (no spectrum needed)
///   2. ratio > periodic_ratio          -> periodic
///   3. ratio > quasi_ratio             -> quasi_periodic
///   4. sigma > free_sigma              -> free
///   5. otherwise                       -> metronomic
inline RubatoCategory classify(double sigma_bpm, std::optional<double> ratio,
                               const ClassifierThresholds& t) {
  if (sigma_bpm < t.metronomic_sigma) return RubatoCategory::metronomic;
  const double r = ratio.value_or(0.0);
  if (r > t.periodic_ratio) return RubatoCategory::periodic;
  if (r > t.quasi_ratio) return RubatoCategory::quasi_periodic;
  if (sigma_bpm > t.free_sigma) return RubatoCategory::free;
  return RubatoCategory::metronomic;
}

namespace detail {

inline void require_min_samples(const TempoCurve& curve, std::size_t min_samples) {
  if (curve.size() < min_samples) {
    throw ExcludedCurveError("tempo curve has " + std::to_string(curve.size()) +
                             " samples, fewer than min_samples = " + std::to_string(min_samples));
  }
}

inline std::pair<double, double> mean_and_population_sd(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(x.size()))};
}

}  // namespace detail

/// Centres the curve, takes its one-sided FFT power spectrum, and finds
/// peaks: non-DC bins that are strict local maxima (edge bins compare with
/// their single non-DC neighbour) with power above 10% of the largest non-DC
/// power. The periodicity ratio is the power summed over all peaks divided by
/// the total non-DC power; the three strongest peaks are reported as periods
/// N / k beats.
inline SpectralProfile spectral_profile(const TempoCurve& curve,
                                        std::size_t min_samples = kDefaultMinSamples) {
  detail::require_min_samples(curve, min_samples);
  SpectralProfile prof;
  prof.n_samples = curve.size();
  std::tie(prof.mean_bpm, prof.sigma_bpm) = detail::mean_and_population_sd(curve.bpm());

  const std::size_t n = curve.size();
  if (n < 4 || prof.sigma_bpm == 0.0) return prof;

  std::vector<double> centred(curve.bpm());
  for (double& v : centred) v -= prof.mean_bpm;
  const std::vector<double> power = power_spectrum(centred);
  const std::size_t last = power.size() - 1;  // highest non-DC bin

  double total = 0.0, max_power = 0.0;
  for (std::size_t k = 1; k <= last; ++k) {
    total += power[k];
    max_power = std::max(max_power, power[k]);
  }
  if (!(total > 0.0)) {
    prof.periodicity_ratio = 0.0;
    return prof;
  }

  std::vector<std::pair<double, std::size_t>> peaks;
  for (std::size_t k = 1; k <= last; ++k) {
    const bool above_left = k == 1 || power[k] > power[k - 1];
    const bool above_right = k == last || power[k] > power[k + 1];
    if (above_left && above_right && power[k] > kPeakFloor * max_power) {
      peaks.emplace_back(power[k], k);
    }
  }
  double peak_total = 0.0;
  for (const auto& p : peaks) peak_total += p.first;
  prof.periodicity_ratio = std::min(1.0, peak_total / total);

  std::stable_sort(peaks.begin(), peaks.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; i < std::min(kReportedPeriods, peaks.size()); ++i) {
    prof.dominant_periods.push_back(
        {static_cast<double>(n) / static_cast<double>(peaks[i].second), peaks[i].first / max_power});
  }
  return prof;
}

inline RubatoAnalysis classify_profile(const SpectralProfile& prof,
                                       const ClassifierThresholds& thresholds) {
  RubatoAnalysis a;
  a.sigma_bpm = prof.sigma_bpm;
  a.category = classify(prof.sigma_bpm, prof.periodicity_ratio, thresholds);
  if (prof.sigma_bpm >= thresholds.metronomic_sigma) {
    a.periodicity_ratio = prof.periodicity_ratio;
    a.dominant_periods = prof.dominant_periods;
  }
  return a;
}

inline RubatoAnalysis rubato_spectral(const TempoCurve& curve,
                                      const ClassifierThresholds& thresholds = {},
                                      std::size_t min_samples = kDefaultMinSamples) {
  thresholds.validate();
  detail::require_min_samples(curve, min_samples);
  const double sigma = detail::mean_and_population_sd(curve.bpm()).second;
  if (sigma < thresholds.metronomic_sigma) {
    RubatoAnalysis a;
    a.sigma_bpm = sigma;
    a.category = RubatoCategory::metronomic;
    return a;
  }
  return classify_profile(spectral_profile(curve, min_samples), thresholds);
}

struct LabeledCurve {
  std::string label;
  std::string id;  // file path or other identifier
  TempoCurve curve;
};

struct CurveResult {
  std::string label;
  std::string id;
  RubatoAnalysis analysis;
};

struct ExcludedCurve {
  std::string label;
  std::string id;
  std::string reason;
};

struct CorpusClassification {
  std::vector<std::string> labels;                 // row order: first appearance
  std::vector<std::array<std::size_t, 4>> table;   // columns in kRubatoCategories order
  std::vector<CurveResult> curves;
  std::vector<ExcludedCurve> excluded;
};

namespace detail {

// Profiles for analysable curves (nullopt marks an excluded curve).
inline std::vector<std::optional<SpectralProfile>> profile_all(
    const std::vector<LabeledCurve>& curves, std::size_t min_samples) {
  std::vector<std::optional<SpectralProfile>> out;
  out.reserve(curves.size());
  for (const auto& c : curves) {
    if (c.curve.size() < min_samples) {
      out.emplace_back(std::nullopt);
    } else {
      out.emplace_back(spectral_profile(c.curve, min_samples));
    }
  }
  return out;
}

inline CorpusClassification classify_profiles(
    const std::vector<LabeledCurve>& curves,
    const std::vector<std::optional<SpectralProfile>>& profiles,
    const ClassifierThresholds& thresholds, std::size_t min_samples) {
  thresholds.validate();
  CorpusClassification out;
  auto row_of = [&](const std::string& label) {
    for (std::size_t i = 0; i < out.labels.size(); ++i) {
      if (out.labels[i] == label) return i;
    }
    out.labels.push_back(label);
    out.table.push_back({0, 0, 0, 0});
    return out.labels.size() - 1;
  };
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    if (!profiles[i]) {
      out.excluded.push_back({c.label, c.id,
                              "tempo curve has " + std::to_string(c.curve.size()) +
                                  " samples, fewer than min_samples = " +
                                  std::to_string(min_samples)});
      continue;
    }
    const auto analysis = classify_profile(*profiles[i], thresholds);
    const std::size_t row = row_of(c.label);
    ++out.table[row][static_cast<std::size_t>(analysis.category)];
    out.curves.push_back({c.label, c.id, analysis});
  }
  if (out.curves.empty()) {
    throw DegenerateInputError("no analysable tempo curves (all shorter than min_samples = " +
                               std::to_string(min_samples) + ")");
  }
  return out;
}

}  // namespace detail

inline CorpusClassification classify_corpus(const std::vector<LabeledCurve>& curves,
                                            const ClassifierThresholds& thresholds = {},
                                            std::size_t min_samples = kDefaultMinSamples) {
  return detail::classify_profiles(curves, detail::profile_all(curves, min_samples), thresholds,
                                   min_samples);
}

struct SensitivityRun {
  std::string name;         // "baseline" or "<threshold> x<multiplier>"
  std::string axis;         // empty for the baseline
  double multiplier = 1.0;
  ClassifierThresholds thresholds;
  CorpusClassification classification;
  // Spectral ratio per analysable curve, in corpus order, shared by all runs.
  std::vector<std::optional<double>> periodicity_ratios;
};

inline constexpr std::array<double, 4> kSensitivityMultipliers = {0.8, 0.9, 1.1, 1.2};

/// Baseline plus each of the four thresholds scaled by 0.8, 0.9, 1.1 and 1.2
/// with the other three held at `base`: seventeen runs. Spectra are computed
/// once; only the classification is repeated.
inline std::vector<SensitivityRun> threshold_sensitivity(const std::vector<LabeledCurve>& curves,
                                                         const ClassifierThresholds& base = {},
                                                         std::size_t min_samples = kDefaultMinSamples) {
  base.validate();
  const auto profiles = detail::profile_all(curves, min_samples);
  std::vector<std::optional<double>> ratios;
  for (const auto& p : profiles) {
    if (p) ratios.push_back(p->periodicity_ratio);
  }

  std::vector<SensitivityRun> runs;
  auto add = [&](std::string name, std::string axis, double mult, ClassifierThresholds t) {
    runs.push_back({std::move(name), std::move(axis), mult, t,
                    detail::classify_profiles(curves, profiles, t, min_samples), ratios});
  };
  add("baseline", "", 1.0, base);
  struct Axis {
    const char* name;
    double ClassifierThresholds::*field;
  };
  constexpr std::array<Axis, 4> axes = {{{"metronomic_sigma", &ClassifierThresholds::metronomic_sigma},
                                         {"free_sigma", &ClassifierThresholds::free_sigma},
                                         {"quasi_ratio", &ClassifierThresholds::quasi_ratio},
                                         {"periodic_ratio", &ClassifierThresholds::periodic_ratio}}};
  for (const auto& axis : axes) {
    for (double mult : kSensitivityMultipliers) {
      ClassifierThresholds t = base;
      t.*axis.field = base.*axis.field * mult;
      char buf[16];
      std::snprintf(buf, sizeof buf, " x%.1f", mult);
      add(std::string(axis.name) + buf, axis.name, mult, t);
    }
  }
  return runs;
}

/// Mean of after - before over pairs, with a percentile bootstrap interval
/// from resampling pairs.
inline Interval paired_delta_ci(std::span<const std::pair<double, double>> pairs,
                                std::size_t replicates = 1000,
                                std::uint64_t seed = Rng::kDefaultSeed) {
  if (pairs.size() < 3) {
    throw DegenerateInputError("paired delta needs at least 3 pairs, got " +
                               std::to_string(pairs.size()));
  }
  std::vector<double> deltas;
  deltas.reserve(pairs.size());
  for (const auto& [before, after] : pairs) deltas.push_back(after - before);
  return bootstrap_mean_ci(deltas, replicates, seed);
}

}  // namespace mirlab
