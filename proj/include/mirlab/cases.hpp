#pragma once

// Corpus pipelines driven by a manifest: per-label divergence matrices, the
// chord-network study and the rubato study. Results come back as JSON
// payloads ready for a run report.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mirlab/chordnet.hpp"
#include "mirlab/distributions.hpp"
#include "mirlab/information.hpp"
#include "mirlab/io.hpp"
#include "mirlab/report.hpp"
#include "mirlab/resample.hpp"
#include "mirlab/rubato.hpp"

namespace mirlab::cases {

using json = nlohmann::ordered_json;

// Seed for the i-th independent analysis inside one run.
inline std::uint64_t derived_seed(std::uint64_t seed, std::uint64_t stream) {
  return Rng::substream(seed, stream).next();
}

inline json error_entry(const std::exception& e) { return {{"error", e.what()}}; }

// ---------------------------------------------------------------------------
// Divergence over labelled groups of sequences.

struct LabelPieces {
  std::string label;
  std::vector<std::string> ids;
  std::vector<std::vector<std::size_t>> pieces;  // encoded symbols per piece
};

inline std::vector<LabelPieces> group_sequences(const io::CorpusManifest& manifest,
                                                const Alphabet& alphabet) {
  std::vector<LabelPieces> groups;
  for (const auto& label : manifest.labels()) groups.push_back({label, {}, {}});
  for (const auto& e : manifest.entries) {
    if (e.kind != io::EntryKind::sequence) {
      throw std::invalid_argument("manifest entry '" + e.id + "' has kind " +
                                  std::string(io::to_string(e.kind)) + "; this command needs sequences");
    }
    auto seq = io::read_sequence(e.path);
    if (seq.empty()) throw DegenerateInputError("sequence file '" + e.id + "' is empty");
    auto& g = *std::find_if(groups.begin(), groups.end(), [&](const auto& x) { return x.label == e.label; });
    g.ids.push_back(e.id);
    g.pieces.push_back(encode(seq, alphabet));
  }
  return groups;
}

enum class Divergence { kl, js };
enum class ResampleUnit { pieces, symbols };

struct DivergenceOptions {
  Divergence measure = Divergence::kl;
  bool symmetrize = false;
  double alpha = kDefaultSmoothing;
  std::size_t replicates = 0;  // 0: no confidence intervals
  ResampleUnit unit = ResampleUnit::pieces;
};

namespace detail {

inline CountVector sum_counts(const std::vector<std::vector<std::size_t>>& pieces, std::size_t n_sym) {
  CountVector c{std::vector<std::uint64_t>(n_sym, 0)};
  for (const auto& p : pieces) {
    for (auto s : p) ++c.counts[s];
  }
  return c;
}

inline double pair_divergence(const CountVector& a, const CountVector& b, const DivergenceOptions& o) {
  const auto p = smooth(a, o.alpha), q = smooth(b, o.alpha);
  if (o.measure == Divergence::js) return js_divergence(p, q);
  if (o.symmetrize) return 0.5 * kl_divergence(p, q) + 0.5 * kl_divergence(q, p);
  return kl_divergence(p, q);
}

// One bootstrap draw of a label's counts: whole pieces or single symbols.
inline void resample_counts(const LabelPieces& g, ResampleUnit unit, Rng& rng, CountVector& out) {
  std::fill(out.counts.begin(), out.counts.end(), 0);
  if (unit == ResampleUnit::pieces) {
    for (std::size_t k = 0; k < g.pieces.size(); ++k) {
      for (auto s : g.pieces[rng.index(g.pieces.size())]) ++out.counts[s];
    }
    return;
  }
  std::size_t total = 0;
  for (const auto& p : g.pieces) total += p.size();
  for (std::size_t k = 0; k < total; ++k) {
    std::size_t r = rng.index(total);
    std::size_t piece = 0;
    while (r >= g.pieces[piece].size()) r -= g.pieces[piece++].size();
    ++out.counts[g.pieces[piece][r]];
  }
}

}  // namespace detail

/// Label-by-label divergence matrix over aggregated, smoothed symbol counts,
/// with optional percentile intervals per off-diagonal cell.
inline json corpus_divergence(const std::vector<LabelPieces>& groups, const Alphabet& alphabet,
                              const DivergenceOptions& o, std::uint64_t seed) {
  const std::size_t n = groups.size();
  if (n < 2) throw DegenerateInputError("divergence matrix needs at least 2 labels");
  if (o.replicates > 0) require_replicates(o.replicates);
  std::vector<CountVector> totals;
  for (const auto& g : groups) totals.push_back(detail::sum_counts(g.pieces, alphabet.size()));

  const bool symmetric = o.measure == Divergence::js || o.symmetrize;
  DivergenceMatrix m;
  m.symmetrized = symmetric;
  for (const auto& g : groups) m.labels.push_back(g.label);
  m.values.assign(n, std::vector<double>(n, 0.0));
  json intervals = json::array();
  std::uint64_t stream = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || (symmetric && j < i)) continue;
      const double d = detail::pair_divergence(totals[i], totals[j], o);
      m.values[i][j] = d;
      if (symmetric) m.values[j][i] = d;
      if (o.replicates == 0) continue;
      const std::uint64_t pair_seed = derived_seed(seed, stream++);
      CountVector ci{std::vector<std::uint64_t>(alphabet.size())};
      CountVector cj{std::vector<std::uint64_t>(alphabet.size())};
      std::vector<double> reps;
      reps.reserve(o.replicates);
      for (std::size_t b = 0; b < o.replicates; ++b) {
        Rng rng = Rng::substream(pair_seed, b);
        detail::resample_counts(groups[i], o.unit, rng, ci);
        detail::resample_counts(groups[j], o.unit, rng, cj);
        reps.push_back(detail::pair_divergence(ci, cj, o));
      }
      const auto [lo, hi] = percentile_95(reps);
      intervals.push_back({{"from", groups[i].label}, {"to", groups[j].label}, {"point", d}, {"lo", lo}, {"hi", hi}});
    }
  }
  json out = {{"matrix", report::to_json(m)}};
  if (o.replicates > 0) out["intervals"] = std::move(intervals);
  return out;
}

// ---------------------------------------------------------------------------
// Chord-network case study.

struct NetworkCaseOptions {
  double threshold = kDefaultPruneThreshold;
  double damping = graph::kDefaultDamping;
};

struct LabelBigrams {
  std::string label;
  CountMatrix counts;
  std::size_t used = 0;
  std::vector<std::string> skipped;  // "<id>: <reason>"
};

/// Sums collapsed bigram counts of every sequence and bigram-matrix entry
/// per label. Sequences too short to yield a transition are skipped and
/// recorded; a label left with nothing is an error.
inline std::vector<LabelBigrams> aggregate_bigrams(const io::CorpusManifest& manifest,
                                                   const Alphabet& alphabet) {
  std::vector<LabelBigrams> out;
  const std::size_t n = alphabet.size();
  for (const auto& label : manifest.labels()) {
    out.push_back({label, CountMatrix(n, std::vector<std::uint64_t>(n, 0)), 0, {}});
  }
  for (const auto& e : manifest.entries) {
    auto& agg = *std::find_if(out.begin(), out.end(), [&](const auto& x) { return x.label == e.label; });
    if (e.kind == io::EntryKind::tempo_curve) {
      throw std::invalid_argument("manifest entry '" + e.id +
                                  "' is a tempo_curve; the network case needs sequences or bigram matrices");
    }
    if (e.kind == io::EntryKind::bigram_matrix) {
      const auto m = io::read_count_matrix(e.path);
      if (m.size() != n) {
        throw std::invalid_argument("bigram matrix '" + e.id + "' is " + std::to_string(m.size()) + "x" +
                                    std::to_string(m.size()) + "; the alphabet has " + std::to_string(n) +
                                    " symbols");
      }
      accumulate(agg.counts, m);
      ++agg.used;
      continue;
    }
    const auto seq = io::read_sequence(e.path);
    try {
      accumulate(agg.counts, bigram_counts(seq, alphabet, true));
      ++agg.used;
    } catch (const DegenerateInputError& err) {
      agg.skipped.push_back(e.id + ": " + err.what());
    }
  }
  for (const auto& agg : out) {
    if (agg.used == 0) throw DegenerateInputError("label '" + agg.label + "' has no valid sequences");
  }
  return out;
}

namespace detail {

inline std::vector<std::vector<double>> select_columns(const std::vector<std::vector<double>>& rows,
                                                       const std::vector<std::size_t>& cols,
                                                       std::span<const std::size_t> subset) {
  std::vector<std::vector<double>> out;
  for (auto r : subset) {
    std::vector<double> row;
    for (auto c : cols) row.push_back(rows[r][c]);
    out.push_back(std::move(row));
  }
  return out;
}

inline std::vector<double> standardized_condensed(const std::vector<std::string>& labels,
                                                  const std::vector<std::vector<double>>& rows,
                                                  const std::vector<std::size_t>& cols,
                                                  std::span<const std::size_t> subset) {
  std::vector<std::string> sub_labels;
  for (auto r : subset) sub_labels.push_back(labels[r]);
  const auto d = standardized_distances(sub_labels, select_columns(rows, cols, subset));
  std::vector<std::size_t> all(subset.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return condensed(d.values, all);
}

// Reference rows/columns reordered to `labels`.
inline std::vector<std::vector<double>> align_reference(const DivergenceMatrix& ref,
                                                        const std::vector<std::string>& labels) {
  std::vector<std::size_t> idx;
  for (const auto& l : labels) {
    const auto it = std::find(ref.labels.begin(), ref.labels.end(), l);
    if (it == ref.labels.end()) throw std::invalid_argument("reference matrix has no label '" + l + "'");
    idx.push_back(static_cast<std::size_t>(it - ref.labels.begin()));
  }
  std::vector<std::vector<double>> out(labels.size(), std::vector<double>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = 0; j < labels.size(); ++j) out[i][j] = ref.values[idx[i]][idx[j]];
  }
  return out;
}

}  // namespace detail

/// Per label: aggregated bigrams, pruned chord graph, network descriptors and
/// feature vector. Across labels: standardised feature distances, the
/// gravity-centre table, and, given a reference matrix, the Spearman
/// correlation with its jackknife and a feature ablation.
inline json run_network_case(const io::CorpusManifest& manifest, const Alphabet& alphabet,
                             const std::optional<DivergenceMatrix>& reference,
                             const NetworkCaseOptions& opt = {}) {
  const auto labels_bigrams = aggregate_bigrams(manifest, alphabet);
  if (labels_bigrams.size() < 3) {
    throw DegenerateInputError("network case needs at least 3 labels, got " +
                               std::to_string(labels_bigrams.size()));
  }

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> centres;
  json per_label = json::array();
  json gravity = json::array();
  json skipped = json::array();
  for (const auto& lb : labels_bigrams) {
    const auto na = network_analysis(chord_graph(lb.counts, alphabet, opt.threshold), opt.damping);
    NetworkFeatureVector fv;
    try {
      fv = feature_vector(na);
    } catch (const DegenerateInputError& e) {
      throw DegenerateInputError("label '" + lb.label + "': " + e.what());
    }
    labels.push_back(lb.label);
    const auto v = fv.values();
    rows.emplace_back(v.begin(), v.end());
    centres.push_back(na.gravity_centre);
    per_label.push_back({{"label", lb.label},
                         {"sources_used", lb.used},
                         {"analysis", report::to_json(na)},
                         {"features", report::to_json(fv)}});
    gravity.push_back({{"label", lb.label}, {"gravity_centre", na.gravity_centre}, {"gravity_pagerank", na.gravity_pagerank}});
    for (const auto& s : lb.skipped) skipped.push_back({{"label", lb.label}, {"reason", s}});
  }

  const auto distances = standardized_distances(labels, rows);
  json out = {{"labels", per_label},
              {"distance", report::to_json(distances)},
              {"gravity", gravity},
              {"skipped", skipped}};
  if (!reference) return out;

  const auto ref = detail::align_reference(*reference, labels);
  std::vector<std::size_t> all(labels.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const std::vector<double> ref_condensed = condensed(ref, all);
  const std::vector<std::size_t> full = {0, 1, 2, 3, 4};

  auto correlate = [&](const std::vector<std::size_t>& cols) -> json {
    try {
      return report::to_json(spearman(detail::standardized_condensed(labels, rows, cols, all), ref_condensed));
    } catch (const std::exception& e) {
      return error_entry(e);
    }
  };

  json scatter = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      scatter.push_back({{"a", labels[i]},
                         {"b", labels[j]},
                         {"network_distance", distances.values[i][j]},
                         {"reference_distance", ref[i][j]}});
    }
  }
  json comparison = {{"spearman", correlate(full)}, {"pairs", std::move(scatter)}};
  if (labels.size() >= 4) {
    try {
      const auto jk = jackknife_spearman(
          std::span<const std::string>(labels),
          [&](std::span<const std::size_t> s) { return detail::standardized_condensed(labels, rows, full, s); },
          [&](std::span<const std::size_t> s) { return condensed(ref, s); });
      comparison["jackknife"] = report::to_json(jk);
    } catch (const std::exception& e) {
      comparison["jackknife"] = error_entry(e);
    }
  } else {
    comparison["jackknife"] = {{"error", "jackknife needs at least 4 labels"}};
  }

  json ablation = json::array();
  ablation.push_back({{"features", "full"}, {"result", correlate(full)}});
  for (std::size_t c = 0; c < full.size(); ++c) {
    ablation.push_back({{"features", std::string("only ") + NetworkFeatureVector::kNames[c]}, {"result", correlate({c})}});
  }
  for (std::size_t c = 0; c < full.size(); ++c) {
    std::vector<std::size_t> cols;
    for (auto k : full) {
      if (k != c) cols.push_back(k);
    }
    ablation.push_back({{"features", std::string("drop ") + NetworkFeatureVector::kNames[c]}, {"result", correlate(cols)}});
  }
  json one_hot;
  try {
    one_hot = report::to_json(spearman(condensed(gravity_one_hot(centres, alphabet), all), ref_condensed));
  } catch (const std::exception& e) {
    one_hot = error_entry(e);
  }
  ablation.push_back({{"features", "gravity one-hot"}, {"result", one_hot}});
  comparison["ablation"] = std::move(ablation);
  out["reference_comparison"] = std::move(comparison);
  return out;
}

// ---------------------------------------------------------------------------
// Rubato case study.

struct RubatoCaseOptions {
  ClassifierThresholds thresholds;
  std::size_t min_samples = kDefaultMinSamples;
  std::size_t replicates = 1000;
  bool sensitivity = false;
  std::optional<std::vector<io::CurvePair>> pairs;
};

inline std::vector<LabeledCurve> load_curves(const io::CorpusManifest& manifest) {
  std::vector<LabeledCurve> curves;
  for (const auto& e : manifest.entries) {
    if (e.kind != io::EntryKind::tempo_curve) {
      throw std::invalid_argument("manifest entry '" + e.id + "' has kind " +
                                  std::string(io::to_string(e.kind)) + "; the rubato case needs tempo_curve entries");
    }
    curves.push_back({e.label, e.id, io::read_tempo_curve(e.path)});
  }
  return curves;
}

namespace detail {

// Spectral ratio used for label summaries and paired deltas: a constant
// curve has no spectral power and counts as 0.
inline double summary_ratio(const SpectralProfile& p) { return p.periodicity_ratio.value_or(0.0); }

inline json quantiles_json(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return {{"min", v.front()},
          {"q1", quantile_sorted(v, 0.25)},
          {"median", quantile_sorted(v, 0.5)},
          {"q3", quantile_sorted(v, 0.75)},
          {"max", v.back()}};
}

}  // namespace detail

/// Per-curve classification and contingency table; per label the mean
/// spectral ratio with a bootstrap interval and its quartiles; optional
/// paired deltas (after - before) of ratio, mean tempo and tempo spread;
/// optional seventeen-run threshold sweep.
inline json run_rubato_case(const io::CorpusManifest& manifest, const RubatoCaseOptions& opt,
                            std::uint64_t seed) {
  opt.thresholds.validate();
  const auto curves = load_curves(manifest);
  const auto profiles = mirlab::detail::profile_all(curves, opt.min_samples);
  const auto cls = mirlab::detail::classify_profiles(curves, profiles, opt.thresholds, opt.min_samples);
  json out = report::to_json(cls);

  json summaries = json::array();
  for (std::size_t li = 0; li < cls.labels.size(); ++li) {
    std::vector<double> ratios;
    for (std::size_t i = 0; i < curves.size(); ++i) {
      if (curves[i].label == cls.labels[li] && profiles[i]) ratios.push_back(detail::summary_ratio(*profiles[i]));
    }
    json s = {{"label", cls.labels[li]}, {"n_curves", ratios.size()}, {"mean_ratio", mean_of(ratios)},
              {"ratio_quantiles", detail::quantiles_json(ratios)}};
    try {
      s["mean_ratio_ci"] = report::to_json(bootstrap_mean_ci(ratios, opt.replicates, derived_seed(seed, li)));
    } catch (const std::exception& e) {
      s["mean_ratio_ci"] = error_entry(e);
    }
    summaries.push_back(std::move(s));
  }
  out["label_summaries"] = std::move(summaries);

  if (opt.pairs) {
    auto find = [&](const std::string& id) -> std::size_t {
      for (std::size_t i = 0; i < curves.size(); ++i) {
        if (curves[i].id == id) {
          if (!profiles[i]) throw DegenerateInputError("paired curve '" + id + "' is excluded (too short)");
          return i;
        }
      }
      throw std::invalid_argument("pairing references curve '" + id + "', which is not in the manifest");
    };
    std::vector<std::pair<double, double>> ratio, mean, sigma;
    json units = json::array();
    for (const auto& p : *opt.pairs) {
      const auto& b = *profiles[find(p.before)];
      const auto& a = *profiles[find(p.after)];
      ratio.emplace_back(detail::summary_ratio(b), detail::summary_ratio(a));
      mean.emplace_back(b.mean_bpm, a.mean_bpm);
      sigma.emplace_back(b.sigma_bpm, a.sigma_bpm);
      units.push_back({{"unit", p.unit},
                       {"delta_periodicity_ratio", ratio.back().second - ratio.back().first},
                       {"delta_mean_bpm", mean.back().second - mean.back().first},
                       {"delta_sigma_bpm", sigma.back().second - sigma.back().first}});
    }
    const std::uint64_t base = cls.labels.size();
    out["paired"] = {
        {"units", std::move(units)},
        {"periodicity_ratio", report::to_json(paired_delta_ci(ratio, opt.replicates, derived_seed(seed, base)))},
        {"mean_bpm", report::to_json(paired_delta_ci(mean, opt.replicates, derived_seed(seed, base + 1)))},
        {"sigma_bpm", report::to_json(paired_delta_ci(sigma, opt.replicates, derived_seed(seed, base + 2)))}};
  }

  if (opt.sensitivity) {
    json runs = json::array();
    for (const auto& run : threshold_sensitivity(curves, opt.thresholds, opt.min_samples)) {
      json ratios = json::array();
      for (const auto& r : run.periodicity_ratios) ratios.push_back(report::optional_json(r));
      runs.push_back({{"name", run.name},
                      {"axis", run.axis},
                      {"multiplier", run.multiplier},
                      {"thresholds", report::to_json(run.thresholds)},
                      {"contingency", report::contingency_json(run.classification)},
                      {"periodicity_ratios", std::move(ratios)}});
    }
    out["sensitivity"] = std::move(runs);
  }
  return out;
}

}  // namespace mirlab::cases
