#pragma once

// Chord-transition graphs: construction from bigram counts, the network
// descriptor suite, and the distances built on top of it.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mirlab/distributions.hpp"
#include "mirlab/error.hpp"
#include "mirlab/graph.hpp"

namespace mirlab {

inline constexpr double kDefaultPruneThreshold = 0.01;

struct ChordGraph {
  Alphabet alphabet;
  std::vector<graph::Edge> edges;  // weight = row-normalised transition probability

  graph::Digraph digraph() const { return {alphabet.size(), edges}; }
};

/// Row-normalises a hollow bigram count matrix and keeps edge (s, t) iff
/// Pr(s -> t) > threshold; probabilities at or below the threshold are
/// pruned. Rows with zero sum have no out-edges.
inline ChordGraph chord_graph(const CountMatrix& bigrams, const Alphabet& alphabet,
                              double threshold = kDefaultPruneThreshold) {
  const std::size_t n = alphabet.size();
  if (!(threshold >= 0.0 && threshold < 1.0)) {
    throw std::invalid_argument("prune threshold must lie in [0, 1)");
  }
  if (bigrams.size() != n) {
    throw std::invalid_argument("bigram matrix has " + std::to_string(bigrams.size()) +
                                " rows, alphabet has " + std::to_string(n) + " symbols");
  }
  ChordGraph g{alphabet, {}};
  bool any = false;
  for (std::size_t s = 0; s < n; ++s) {
    if (bigrams[s].size() != n) throw std::invalid_argument("bigram matrix is not square");
    if (bigrams[s][s] != 0) {
      throw std::invalid_argument("bigram matrix has a self-transition at '" +
                                  alphabet.symbol(s) + "'; collapse duplicates first");
    }
    std::uint64_t row = 0;
    for (auto c : bigrams[s]) row += c;
    if (row == 0) continue;
    any = true;
    for (std::size_t t = 0; t < n; ++t) {
      if (bigrams[s][t] == 0) continue;
      const double p = static_cast<double>(bigrams[s][t]) / static_cast<double>(row);
      if (p > threshold) g.edges.push_back({s, t, p});
    }
  }
  if (!any) throw DegenerateInputError("bigram matrix is all zero");
  return g;
}

inline constexpr double kSmallWorldClustering = 0.3;
inline constexpr double kSmallWorldPath = 3.0;

struct NetworkAnalysis {
  std::vector<std::string> nodes;
  std::vector<double> pagerank;
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> out_degree;
  std::vector<double> in_strength;
  std::vector<double> local_clustering;
  std::vector<std::size_t> communities;  // community id per node
  std::size_t edge_count = 0;
  double density = 0.0;
  double mean_clustering = 0.0;
  std::size_t community_count = 0;
  double modularity = 0.0;
  std::optional<std::size_t> diameter;
  std::optional<double> avg_path;
  bool small_world = false;
  std::string gravity_centre;
  double gravity_pagerank = 0.0;
};

// Index of the largest value; values within 1e-12 of the maximum count as
// tied and the earliest (alphabet order) wins.
inline std::size_t argmax_alphabet_order(const std::vector<double>& v) {
  double best = v.front();
  for (double x : v) best = std::max(best, x);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] >= best - 1e-12) return i;
  }
  return 0;
}

inline NetworkAnalysis network_analysis(const ChordGraph& g,
                                        double damping = graph::kDefaultDamping) {
  if (g.edges.empty()) throw DegenerateInputError("network analysis of a graph with no edges");
  const graph::Digraph dg = g.digraph();
  dg.validate();
  const std::size_t n = dg.node_count;

  NetworkAnalysis na;
  na.nodes = g.alphabet.symbols();
  na.pagerank = graph::pagerank(dg, damping);
  na.in_degree.assign(n, 0);
  na.out_degree.assign(n, 0);
  na.in_strength.assign(n, 0.0);
  for (const auto& e : dg.edges) {
    ++na.out_degree[e.source];
    ++na.in_degree[e.target];
    na.in_strength[e.target] += e.weight;
  }
  na.local_clustering = graph::local_clustering(dg);
  na.edge_count = dg.edges.size();
  na.density = static_cast<double>(na.edge_count) / static_cast<double>(n * (n - 1));
  double sum_c = 0.0;
  for (double c : na.local_clustering) sum_c += c;
  na.mean_clustering = sum_c / static_cast<double>(n);

  const auto comms = graph::greedy_modularity(dg);
  na.communities = comms.membership;
  na.community_count = comms.count;
  na.modularity = comms.modularity;

  const auto hops = graph::largest_scc_hop_metrics(dg);
  na.diameter = hops.diameter;
  na.avg_path = hops.avg_path;
  na.small_world = na.mean_clustering > kSmallWorldClustering && na.avg_path.has_value() &&
                   *na.avg_path > 0.0 && *na.avg_path < kSmallWorldPath;

  const std::size_t top = argmax_alphabet_order(na.pagerank);
  na.gravity_centre = na.nodes[top];
  na.gravity_pagerank = na.pagerank[top];
  return na;
}

struct NetworkFeatureVector {
  static constexpr std::size_t kSize = 5;
  static constexpr std::array<const char*, kSize> kNames = {
      "density", "mean_clustering", "community_count", "avg_path", "gravity_pagerank"};

  double density = 0.0;
  double mean_clustering = 0.0;
  double community_count = 0.0;
  double avg_path = 0.0;
  double gravity_pagerank = 0.0;

  std::array<double, kSize> values() const {
    return {density, mean_clustering, community_count, avg_path, gravity_pagerank};
  }
};

inline NetworkFeatureVector feature_vector(const NetworkAnalysis& na) {
  if (!na.avg_path) {
    throw DegenerateInputError(
        "feature vector needs avg_path; the largest strongly connected component has < 2 nodes");
  }
  return {na.density, na.mean_clustering, static_cast<double>(na.community_count), *na.avg_path,
          na.gravity_pagerank};
}

struct DistanceMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  std::vector<std::size_t> dropped_components;  // constant across inputs, left out
};

/// Euclidean distances between rows after standardising each column to zero
/// mean and unit (population) variance. Columns that are constant across all
/// rows cannot be standardised and are dropped; they are listed in
/// `dropped_components`. Fails if every column is constant.
inline DistanceMatrix standardized_distances(const std::vector<std::string>& labels,
                                             const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n < 3) {
    throw DegenerateInputError("standardised distances need at least 3 vectors, got " +
                               std::to_string(n));
  }
  if (labels.size() != n) throw std::invalid_argument("label count does not match vector count");
  const std::size_t dim = rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != dim) throw std::invalid_argument("feature vectors differ in length");
  }

  DistanceMatrix out;
  out.labels = labels;
  std::vector<std::vector<double>> z(n);
  for (std::size_t c = 0; c < dim; ++c) {
    double mean = 0.0;
    for (const auto& r : rows) mean += r[c];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& r : rows) var += (r[c] - mean) * (r[c] - mean);
    var /= static_cast<double>(n);
    bool constant = true;
    for (const auto& r : rows) constant = constant && r[c] == rows.front()[c];
    if (constant || var == 0.0) {
      out.dropped_components.push_back(c);
      continue;
    }
    const double sd = std::sqrt(var);
    for (std::size_t i = 0; i < n; ++i) z[i].push_back((rows[i][c] - mean) / sd);
  }
  if (out.dropped_components.size() == dim) {
    throw DegenerateInputError("every feature is constant across the inputs; no distance defined");
  }
  out.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double ss = 0.0;
      for (std::size_t c = 0; c < z[i].size(); ++c) ss += (z[i][c] - z[j][c]) * (z[i][c] - z[j][c]);
      out.values[i][j] = out.values[j][i] = std::sqrt(ss);
    }
  }
  return out;
}

struct LabeledFeatureVector {
  std::string label;
  NetworkFeatureVector features;
};

inline DistanceMatrix pairwise_network_distance(const std::vector<LabeledFeatureVector>& vectors) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  for (const auto& v : vectors) {
    labels.push_back(v.label);
    const auto a = v.features.values();
    rows.emplace_back(a.begin(), a.end());
  }
  return standardized_distances(labels, rows);
}

/// Euclidean distance between one-hot encodings of categorical centres:
/// 0 for equal centres, sqrt(2) otherwise.
inline std::vector<std::vector<double>> gravity_one_hot(const std::vector<std::string>& centres,
                                                        const Alphabet& alphabet) {
  if (centres.size() < 2) throw DegenerateInputError("gravity one-hot needs at least 2 centres");
  std::vector<std::size_t> idx;
  for (const auto& c : centres) idx.push_back(alphabet.index(c));
  const std::size_t n = centres.size();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (idx[i] != idx[j]) d[i][j] = std::sqrt(2.0);
    }
  }
  return d;
}

}  // namespace mirlab
