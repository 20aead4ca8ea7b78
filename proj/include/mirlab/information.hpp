#pragma once

// Shannon entropy, Kullback-Leibler and Jensen-Shannon divergences (bits).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mirlab/distributions.hpp"
#include "mirlab/resample.hpp"

namespace mirlab {

struct DivergenceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  bool symmetrized = false;
};

struct LabeledDistribution {
  std::string label;
  ProbabilityVector probs;
};

// 0 log 0 is taken as 0.
inline double shannon_entropy(const ProbabilityVector& p) {
  double h = 0.0;
  for (double x : p) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

namespace detail {
inline void require_same_alphabet(const ProbabilityVector& p, const ProbabilityVector& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distributions live on different alphabets (sizes " +
                                std::to_string(p.size()) + " and " + std::to_string(q.size()) +
                                ")");
  }
}
}  // namespace detail

inline double kl_divergence(const ProbabilityVector& p, const ProbabilityVector& q) {
  detail::require_same_alphabet(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw std::invalid_argument(
          "KL divergence is infinite: q has zero mass at symbol index " + std::to_string(i) +
          " where p is positive; smooth q (alpha > 0) before comparing");
    }
    d += p[i] * std::log2(p[i] / q[i]);
  }
  // Rounding can leave tiny negative residues when p and q are near-equal.
  return d < 0.0 ? 0.0 : d;
}

inline double js_divergence(const ProbabilityVector& p, const ProbabilityVector& q) {
  detail::require_same_alphabet(p, q);
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    // Each symbol's two terms are added first, so swapping p and q is exact.
    const double m = 0.5 * (p[i] + q[i]);
    const double tp = p[i] > 0.0 ? p[i] * std::log2(p[i] / m) : 0.0;
    const double tq = q[i] > 0.0 ? q[i] * std::log2(q[i] / m) : 0.0;
    d += 0.5 * (tp + tq);
  }
  return std::clamp(d, 0.0, 1.0);
}

/// Pairwise KL matrix. With `symmetrize`, entry (i, j) is
/// 0.5 D(P_i||P_j) + 0.5 D(P_j||P_i) and the matrix is exactly symmetric.
inline DivergenceMatrix kl_pairwise_matrix(const std::vector<LabeledDistribution>& dists,
                                           bool symmetrize) {
  if (dists.size() < 2) {
    throw DegenerateInputError("pairwise matrix needs at least 2 distributions");
  }
  const std::size_t n = dists.size();
  for (const auto& d : dists) {
    detail::require_same_alphabet(dists.front().probs, d.probs);
    for (double x : d.probs) {
      if (x <= 0.0) {
        throw std::invalid_argument("distribution '" + d.label +
                                    "' has a zero entry; pairwise KL requires smoothed inputs");
      }
    }
  }
  DivergenceMatrix out;
  out.symmetrized = symmetrize;
  for (const auto& d : dists) out.labels.push_back(d.label);
  out.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (symmetrize) {
        if (j < i) continue;
        const double v = 0.5 * kl_divergence(dists[i].probs, dists[j].probs) +
                         0.5 * kl_divergence(dists[j].probs, dists[i].probs);
        out.values[i][j] = v;
        out.values[j][i] = v;
      } else {
        out.values[i][j] = kl_divergence(dists[i].probs, dists[j].probs);
      }
    }
  }
  return out;
}

/// Percentile bootstrap interval for the smoothed KL divergence of two
/// symbol sequences. Each replicate resamples both sequences (symbol level,
/// with replacement, original lengths) from substream b of `seed`.
inline Interval divergence_bootstrap_ci(const SymbolSequence& seq_p, const SymbolSequence& seq_q,
                                        const Alphabet& alphabet, std::size_t replicates = 1000,
                                        std::uint64_t seed = Rng::kDefaultSeed,
                                        double alpha = kDefaultSmoothing) {
  if (seq_p.empty() || seq_q.empty()) {
    throw DegenerateInputError("divergence bootstrap needs two non-empty sequences");
  }
  require_replicates(replicates);
  const auto ip = encode(seq_p, alphabet);
  const auto iq = encode(seq_q, alphabet);
  const double point = kl_divergence(smooth(counts_from_sequence(seq_p, alphabet), alpha),
                                     smooth(counts_from_sequence(seq_q, alphabet), alpha));
  std::vector<double> reps;
  reps.reserve(replicates);
  CountVector cp{std::vector<std::uint64_t>(alphabet.size())};
  CountVector cq{std::vector<std::uint64_t>(alphabet.size())};
  for (std::size_t b = 0; b < replicates; ++b) {
    Rng rng = Rng::substream(seed, b);
    std::fill(cp.counts.begin(), cp.counts.end(), 0);
    std::fill(cq.counts.begin(), cq.counts.end(), 0);
    for (std::size_t k = 0; k < ip.size(); ++k) ++cp.counts[ip[rng.index(ip.size())]];
    for (std::size_t k = 0; k < iq.size(); ++k) ++cq.counts[iq[rng.index(iq.size())]];
    reps.push_back(kl_divergence(smooth(cp, alpha), smooth(cq, alpha)));
  }
  const auto [lo, hi] = percentile_95(reps);
  return {point, lo, hi};
}

}  // namespace mirlab
