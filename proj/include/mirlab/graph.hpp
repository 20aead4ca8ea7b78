#pragma once

// Algorithms on small dense weighted directed graphs: weighted PageRank,
// directed local clustering, strongly connected components with hop-distance
// metrics, and greedy (Clauset-Newman-Moore) modularity on the undirected
// projection. Node counts here are in the tens to hundreds, so dense
// adjacency is used throughout.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace mirlab::graph {

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0.0;
};

struct Digraph {
  std::size_t node_count = 0;
  std::vector<Edge> edges;

  void validate() const {
    for (const auto& e : edges) {
      if (e.source >= node_count || e.target >= node_count) {
        throw std::invalid_argument("edge endpoint out of range");
      }
      if (!(e.weight > 0.0)) throw std::invalid_argument("edge weights must be positive");
    }
  }

  std::vector<std::vector<bool>> adjacency() const {
    std::vector<std::vector<bool>> a(node_count, std::vector<bool>(node_count, false));
    for (const auto& e : edges) a[e.source][e.target] = true;
    return a;
  }
};

inline constexpr double kDefaultDamping = 0.85;
inline constexpr double kPageRankTolerance = 1e-10;

/// Weighted PageRank by power iteration. A step from u follows out-edge
/// (u, v) with probability w(u,v) / out_strength(u); nodes with no out-edges
/// spread their mass uniformly; teleport is uniform with probability
/// 1 - damping. Iterates until successive vectors differ by less than
/// `tolerance` in L1.
inline std::vector<double> pagerank(const Digraph& g, double damping = kDefaultDamping,
                                    double tolerance = kPageRankTolerance,
                                    std::size_t max_iterations = 100000) {
  if (!(damping >= 0.0 && damping < 1.0)) {
    throw std::invalid_argument("pagerank damping must lie in [0, 1)");
  }
  const std::size_t n = g.node_count;
  if (n == 0) throw std::invalid_argument("pagerank on an empty graph");
  std::vector<double> strength(n, 0.0);
  for (const auto& e : g.edges) strength[e.source] += e.weight;

  const double nd = static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / nd), next(n);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double dangling = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      if (strength[v] == 0.0) dangling += rank[v];
    }
    const double base = (1.0 - damping) / nd + damping * dangling / nd;
    std::fill(next.begin(), next.end(), base);
    for (const auto& e : g.edges) {
      next[e.target] += damping * rank[e.source] * e.weight / strength[e.source];
    }
    double diff = 0.0;
    for (std::size_t v = 0; v < n; ++v) diff += std::abs(next[v] - rank[v]);
    rank.swap(next);
    if (diff < tolerance) {
      double total = 0.0;
      for (double r : rank) total += r;
      for (double& r : rank) r /= total;
      return rank;
    }
  }
  throw std::runtime_error("pagerank did not converge");
}

/// Directed local clustering (total-triangle generalisation) on the
/// unweighted edge set:
///   c(v) = [(A + A^T)^3]_vv / (2 (d_tot (d_tot - 1) - 2 d_bidir)),
/// zero when the denominator vanishes. Equals 1 on a complete digraph.
inline std::vector<double> local_clustering(const Digraph& g) {
  const std::size_t n = g.node_count;
  const auto a = g.adjacency();
  std::vector<std::vector<int>> s(n, std::vector<int>(n, 0));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) s[u][v] = int(a[u][v]) + int(a[v][u]);
  }
  std::vector<double> c(n, 0.0);
  std::vector<std::size_t> nbrs;
  for (std::size_t v = 0; v < n; ++v) {
    nbrs.clear();
    long long d_tot = 0, d_bidir = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v) continue;
      d_tot += int(a[v][u]) + int(a[u][v]);
      if (a[v][u] && a[u][v]) ++d_bidir;
      if (s[v][u] > 0) nbrs.push_back(u);
    }
    const long long denom = 2 * (d_tot * (d_tot - 1) - 2 * d_bidir);
    if (denom <= 0) continue;
    long long triangles = 0;
    for (std::size_t j : nbrs) {
      for (std::size_t h : nbrs) {
        triangles += static_cast<long long>(s[v][j]) * s[j][h] * s[h][v];
      }
    }
    c[v] = static_cast<double>(triangles) / static_cast<double>(denom);
  }
  return c;
}

inline constexpr std::size_t kUnreachable = std::numeric_limits<std::size_t>::max();

// Unweighted hop distances from every node (BFS), kUnreachable where no path.
inline std::vector<std::vector<std::size_t>> hop_distances(const Digraph& g) {
  const std::size_t n = g.node_count;
  std::vector<std::vector<std::size_t>> out_nbrs(n);
  {
    const auto a = g.adjacency();
    for (std::size_t u = 0; u < n; ++u) {
      for (std::size_t v = 0; v < n; ++v) {
        if (a[u][v] && u != v) out_nbrs[u].push_back(v);
      }
    }
  }
  std::vector<std::vector<std::size_t>> dist(n, std::vector<std::size_t>(n, kUnreachable));
  std::queue<std::size_t> q;
  for (std::size_t s = 0; s < n; ++s) {
    dist[s][s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : out_nbrs[u]) {
        if (dist[s][v] == kUnreachable) {
          dist[s][v] = dist[s][u] + 1;
          q.push(v);
        }
      }
    }
  }
  return dist;
}

/// Strongly connected components from mutual reachability, each sorted
/// ascending, components ordered by their smallest node.
inline std::vector<std::vector<std::size_t>> strongly_connected_components(
    const std::vector<std::vector<std::size_t>>& dist) {
  const std::size_t n = dist.size();
  std::vector<bool> assigned(n, false);
  std::vector<std::vector<std::size_t>> comps;
  for (std::size_t v = 0; v < n; ++v) {
    if (assigned[v]) continue;
    std::vector<std::size_t> comp;
    for (std::size_t u = v; u < n; ++u) {
      if (!assigned[u] && dist[v][u] != kUnreachable && dist[u][v] != kUnreachable) {
        comp.push_back(u);
        assigned[u] = true;
      }
    }
    comps.push_back(std::move(comp));
  }
  return comps;
}

struct HopMetrics {
  std::size_t component_size = 0;
  std::optional<std::size_t> diameter;
  std::optional<double> avg_path;
};

// Diameter and mean hop distance over ordered pairs of the largest strongly
// connected component (ties: the one holding the smallest node). Absent when
// that component has fewer than 2 nodes.
inline HopMetrics largest_scc_hop_metrics(const Digraph& g) {
  const auto dist = hop_distances(g);
  const auto comps = strongly_connected_components(dist);
  const std::vector<std::size_t>* best = nullptr;
  for (const auto& c : comps) {
    if (best == nullptr || c.size() > best->size()) best = &c;
  }
  HopMetrics m;
  if (best == nullptr) return m;
  m.component_size = best->size();
  if (best->size() < 2) return m;
  std::size_t diameter = 0;
  double total = 0.0;
  for (std::size_t u : *best) {
    for (std::size_t v : *best) {
      if (u == v) continue;
      diameter = std::max(diameter, dist[u][v]);
      total += static_cast<double>(dist[u][v]);
    }
  }
  const double pairs = static_cast<double>(best->size() * (best->size() - 1));
  m.diameter = diameter;
  m.avg_path = total / pairs;
  return m;
}

struct Communities {
  std::vector<std::size_t> membership;  // community id per node, ids by first appearance
  std::size_t count = 0;
  double modularity = 0.0;
};

/// Weighted modularity of a partition of the undirected projection
/// (weights of u->v and v->u summed).
inline double modularity(const Digraph& g, const std::vector<std::size_t>& membership) {
  const std::size_t n = g.node_count;
  std::vector<double> strength(n, 0.0);
  double two_m = 0.0;
  double inside = 0.0;
  for (const auto& e : g.edges) {
    if (e.source == e.target) continue;
    strength[e.source] += e.weight;
    strength[e.target] += e.weight;
    two_m += 2.0 * e.weight;
    if (membership[e.source] == membership[e.target]) inside += 2.0 * e.weight;
  }
  if (two_m == 0.0) throw std::invalid_argument("modularity of a graph without edges");
  std::size_t k = 0;
  for (auto c : membership) k = std::max(k, c + 1);
  std::vector<double> comm_strength(k, 0.0);
  for (std::size_t v = 0; v < n; ++v) comm_strength[membership[v]] += strength[v];
  double expected = 0.0;
  for (double s : comm_strength) expected += (s / two_m) * (s / two_m);
  return inside / two_m - expected;
}

/// Clauset-Newman-Moore greedy agglomeration on the weighted undirected
/// projection. Starting from singletons, repeatedly merges the connected pair
/// of communities with the largest modularity gain 2 (e_ij - a_i a_j), ties
/// going to the lexicographically smallest (i, j); stops when no merge has a
/// positive gain. Isolated nodes stay singleton communities.
inline Communities greedy_modularity(const Digraph& g) {
  const std::size_t n = g.node_count;
  std::vector<std::vector<double>> e(n, std::vector<double>(n, 0.0));
  double two_m = 0.0;
  for (const auto& edge : g.edges) {
    if (edge.source == edge.target) continue;
    e[edge.source][edge.target] += edge.weight;
    e[edge.target][edge.source] += edge.weight;
    two_m += 2.0 * edge.weight;
  }
  if (two_m == 0.0) throw std::invalid_argument("community detection on a graph without edges");
  std::vector<double> a(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      e[i][j] /= two_m;
      a[i] += e[i][j];
    }
  }

  std::vector<bool> alive(n, true);
  std::vector<std::size_t> owner(n);
  for (std::size_t v = 0; v < n; ++v) owner[v] = v;

  while (true) {
    double best_gain = 0.0;
    std::size_t bi = n, bj = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j] || e[i][j] <= 0.0) continue;
        const double gain = 2.0 * (e[i][j] - a[i] * a[j]);
        if (gain > best_gain) {
          best_gain = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi == n) break;
    // Fold community bj into bi.
    for (std::size_t k = 0; k < n; ++k) {
      if (!alive[k] || k == bi || k == bj) continue;
      e[bi][k] += e[bj][k];
      e[k][bi] = e[bi][k];
      e[bj][k] = e[k][bj] = 0.0;
    }
    e[bi][bi] += e[bj][bj] + 2.0 * e[bi][bj];
    e[bi][bj] = e[bj][bi] = e[bj][bj] = 0.0;
    a[bi] += a[bj];
    a[bj] = 0.0;
    alive[bj] = false;
    for (auto& o : owner) {
      if (o == bj) o = bi;
    }
  }

  Communities out;
  out.membership.assign(n, 0);
  std::vector<std::size_t> relabel(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    if (relabel[owner[v]] == n) relabel[owner[v]] = out.count++;
    out.membership[v] = relabel[owner[v]];
  }
  out.modularity = modularity(g, out.membership);
  return out;
}

}  // namespace mirlab::graph
