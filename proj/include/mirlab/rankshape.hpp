#pragma once

// Rank-frequency (Zipf) fitting and the Gini inequality coefficient.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mirlab/error.hpp"

namespace mirlab {

struct ZipfFit {
  double alpha = 0.0;
  double r_squared = 0.0;
  std::size_t n_ranks = 0;
};

/// Ordinary least squares of log2 f_r on log2 r over the positive
/// frequencies sorted in descending order; alpha is the negated slope.
/// Zero frequencies are dropped before ranking.
inline ZipfFit zipf_fit(std::span<const double> freqs) {
  std::vector<double> f;
  f.reserve(freqs.size());
  for (double x : freqs) {
    if (x < 0.0 || !std::isfinite(x)) {
      throw std::invalid_argument("zipf_fit: frequencies must be finite and non-negative");
    }
    if (x > 0.0) f.push_back(x);
  }
  if (f.size() < 3) {
    throw DegenerateInputError("zipf_fit needs at least 3 positive frequencies, got " +
                               std::to_string(f.size()));
  }
  std::sort(f.begin(), f.end(), std::greater<>());

  const std::size_t n = f.size();
  std::vector<double> lx(n), ly(n);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    lx[i] = std::log2(static_cast<double>(i + 1));
    ly[i] = std::log2(f[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }

  ZipfFit fit;
  fit.n_ranks = n;
  if (f.front() == f.back()) {
    fit.alpha = 0.0;
    fit.r_squared = 1.0;
    return fit;
  }
  const double slope = sxy / sxx;
  fit.alpha = -slope;
  // Residual sum of squares of the fitted line is syy - slope * sxy.
  const double ss_res = std::max(0.0, syy - slope * sxy);
  fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  return fit;
}

/// Gini coefficient sum_ij |x_i - x_j| / (2 n sum x), evaluated in
/// O(n log n) from consecutive gaps of the sorted sample:
/// sum_{i<j} |x_i - x_j| = sum_k (x_(k+1) - x_(k)) * k * (n - k).
inline double gini(std::span<const double> values) {
  if (values.size() < 2) {
    throw DegenerateInputError("gini needs at least 2 values, got " +
                               std::to_string(values.size()));
  }
  std::vector<double> x(values.begin(), values.end());
  double total = 0.0;
  for (double v : x) {
    if (v < 0.0 || !std::isfinite(v)) {
      throw std::invalid_argument("gini: values must be finite and non-negative");
    }
    total += v;
  }
  if (total == 0.0) throw DegenerateInputError("gini undefined for an all-zero input");
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  double gap_sum = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    gap_sum += (x[k] - x[k - 1]) * static_cast<double>(k) * static_cast<double>(n - k);
  }
  return gap_sum / (static_cast<double>(n) * total);
}

struct GiniEntry {
  std::string label;
  std::optional<double> gini;
  std::string error;  // set when gini is empty
};

struct GiniReport {
  std::vector<GiniEntry> per_dimension;
};

// Rows are observations, columns are the labelled dimensions. A column that
// cannot be scored gets an error entry; the others are still computed.
inline GiniReport gini_multi(const std::vector<std::string>& labels,
                             const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) {
    throw DegenerateInputError("gini_multi needs at least 2 rows, got " +
                               std::to_string(rows.size()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    for (std::size_t j = i + 1; j < labels.size(); ++j) {
      if (labels[i] == labels[j]) {
        throw std::invalid_argument("duplicate dimension label '" + labels[i] + "'");
      }
    }
  }
  for (const auto& r : rows) {
    if (r.size() != labels.size()) {
      throw std::invalid_argument("gini_multi: row has " + std::to_string(r.size()) +
                                  " columns, expected " + std::to_string(labels.size()));
    }
  }
  GiniReport report;
  std::vector<double> column(rows.size());
  for (std::size_t c = 0; c < labels.size(); ++c) {
    for (std::size_t r = 0; r < rows.size(); ++r) column[r] = rows[r][c];
    GiniEntry entry{labels[c], std::nullopt, {}};
    try {
      entry.gini = gini(column);
    } catch (const std::invalid_argument& e) {
      entry.error = e.what();
    }
    report.per_dimension.push_back(std::move(entry));
  }
  return report;
}

}  // namespace mirlab
