#pragma once

// Synthetic fixtures shared by the unit tests and the acceptance gate.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "mirlab/rng.hpp"

namespace mirlab::testing {

// Fourteen units on a line. Distances under A are |x_i - x_j|; under B they
// are |y_i - y_j| with y independent of x, except unit `planted`, which sits
// far out in both, so its pairs alone carry the rank agreement.
struct PlantedUnits {
  std::vector<std::string> names;
  std::vector<double> x, y;
  std::size_t planted = 0;

  std::vector<double> dist_a(std::span<const std::size_t> s) const { return pairwise(x, s); }
  std::vector<double> dist_b(std::span<const std::size_t> s) const { return pairwise(y, s); }

  static std::vector<double> pairwise(const std::vector<double>& v, std::span<const std::size_t> s) {
    std::vector<double> out;
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t j = i + 1; j < s.size(); ++j) out.push_back(std::abs(v[s[i]] - v[s[j]]));
    return out;
  }
};

inline PlantedUnits planted_units(std::uint64_t seed, std::size_t n = 14, std::size_t planted = 5) {
  Rng rng(seed);
  PlantedUnits u;
  u.planted = planted;
  for (std::size_t i = 0; i < n; ++i) {
    u.names.push_back("unit" + std::to_string(i));
    u.x.push_back(rng.uniform());
    u.y.push_back(rng.uniform());
  }
  u.x[planted] = 50.0;
  u.y[planted] = 50.0;
  return u;
}

}  // namespace mirlab::testing
