#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mirlab {

/// Seedable generator with a fully specified output sequence.
///
/// The engine is std::mt19937_64, whose output is fixed by the standard, and
/// every derived draw (bounded index, uniform real, normal, exponential,
/// Laplace) is computed here rather than through std::*_distribution, whose
/// algorithms vary between standard libraries. Results are therefore
/// bit-reproducible across platforms for a given seed.
///
/// Seeds are scrambled with SplitMix64 so that nearby seeds (0, 1, 2, ...)
/// give unrelated streams. `substream(seed, k)` gives the k-th independent
/// stream of a seed; bootstrap replicate k always draws from substream k,
/// so replicates can be evaluated in any order.
class Rng {
 public:
  static constexpr std::uint64_t kDefaultSeed = 20260501;

  explicit Rng(std::uint64_t seed = kDefaultSeed) : engine_(splitmix64(seed)) {}

  static Rng substream(std::uint64_t seed, std::uint64_t stream) {
    return Rng(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n), Lemire's multiply-shift with rejection.
  std::uint64_t index(std::uint64_t n) {
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Box-Muller; one draw per call, the sine branch is discarded.
  double normal(double mean = 0.0, double sd = 1.0) {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return mean + sd * std::sqrt(-2.0 * std::log(u1)) *
                      std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

  double laplace(double location, double scale) {
    const double u = uniform() - 0.5;
    const double sign = u < 0 ? -1.0 : 1.0;
    return location - scale * sign * std::log1p(-2.0 * std::abs(u));
  }

 private:
  static constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 engine_;
};

}  // namespace mirlab
