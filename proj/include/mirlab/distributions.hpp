#pragma once

// Alphabets, counting, smoothing and sequence preprocessing shared by every
// metric. Counting is exact integer arithmetic; smoothing is the only place
// reals enter.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mirlab/error.hpp"

namespace mirlab {

inline constexpr double kDefaultSmoothing = 0.5;

using SymbolSequence = std::vector<std::string>;

class Alphabet {
 public:
  explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
    if (symbols_.size() < 2) {
      throw std::invalid_argument("alphabet needs at least 2 symbols, got " +
                                  std::to_string(symbols_.size()));
    }
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
      if (!index_.emplace(symbols_[i], i).second) {
        throw std::invalid_argument("duplicate alphabet symbol '" + symbols_[i] + "'");
      }
    }
  }

  // Fifteen scale-degree symbols. Only a subset of the symbol set used in
  // the original corpus work is documented; the rest is a stand-in.
  static Alphabet scale_degrees() {
    return Alphabet({"I", "i", "II", "ii", "III", "iii", "IV", "iv", "V", "v", "VI", "vi",
                     "VII", "vii", "bVI"});
  }

  // Synthetic labels "n0".."n{size-1}", for graphs with no musical meaning.
  static Alphabet numbered(std::size_t size) {
    std::vector<std::string> symbols;
    symbols.reserve(size);
    for (std::size_t i = 0; i < size; ++i) symbols.push_back("n" + std::to_string(i));
    return Alphabet(std::move(symbols));
  }

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  bool contains(const std::string& s) const { return index_.count(s) != 0; }

  std::size_t index(const std::string& s) const {
    const auto it = index_.find(s);
    if (it == index_.end()) throw std::invalid_argument("symbol " + s + " not in alphabet");
    return it->second;
  }

  friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct CountVector {
  std::vector<std::uint64_t> counts;

  std::uint64_t total() const {
    std::uint64_t t = 0;
    for (auto c : counts) t += c;
    return t;
  }
  std::size_t size() const { return counts.size(); }
};

/// Non-negative reals summing to one within 1e-12.
class ProbabilityVector {
 public:
  static constexpr double kSumTolerance = 1e-12;

  explicit ProbabilityVector(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw std::invalid_argument("probability vector is empty");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw std::invalid_argument("probability entries must be finite and non-negative");
      }
      sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw std::invalid_argument("probabilities sum to " + std::to_string(sum) + ", not 1");
    }
  }

  // Rescales non-negative weights to unit sum.
  static ProbabilityVector normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) sum += w;
    if (!(sum > 0.0)) throw DegenerateInputError("cannot normalise weights with zero total");
    for (double& w : weights) w /= sum;
    return ProbabilityVector(std::move(weights));
  }

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& values() const { return probs_; }
  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

 private:
  std::vector<double> probs_;
};

template <class T>
std::vector<T> collapse_duplicates(std::span<const T> seq) {
  if (seq.empty()) throw DegenerateInputError("cannot collapse an empty sequence");
  std::vector<T> out;
  out.reserve(seq.size());
  for (const auto& item : seq) {
    if (out.empty() || !(out.back() == item)) out.push_back(item);
  }
  return out;
}

inline SymbolSequence collapse_duplicates(const SymbolSequence& seq) {
  return collapse_duplicates(std::span<const std::string>(seq));
}

inline std::vector<std::size_t> encode(const SymbolSequence& seq, const Alphabet& alphabet) {
  std::vector<std::size_t> out;
  out.reserve(seq.size());
  for (const auto& s : seq) out.push_back(alphabet.index(s));
  return out;
}

inline CountVector counts_from_sequence(const SymbolSequence& seq, const Alphabet& alphabet) {
  if (seq.empty()) throw DegenerateInputError("cannot count an empty sequence");
  CountVector cv{std::vector<std::uint64_t>(alphabet.size(), 0)};
  for (const auto& s : seq) ++cv.counts[alphabet.index(s)];
  return cv;
}

/// Additive (Jeffreys-Laplace at alpha = 0.5) smoothing:
/// p_i = (c_i + alpha) / (total + alpha * N).
inline ProbabilityVector smooth(const CountVector& counts, double alpha = kDefaultSmoothing) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("smoothing alpha must be > 0, got " + std::to_string(alpha));
  }
  if (counts.size() < 2) throw std::invalid_argument("count vector needs at least 2 cells");
  const double denom =
      static_cast<double>(counts.total()) + alpha * static_cast<double>(counts.size());
  std::vector<double> probs;
  probs.reserve(counts.size());
  for (auto c : counts.counts) probs.push_back((static_cast<double>(c) + alpha) / denom);
  return ProbabilityVector(std::move(probs));
}

// N x N integer matrix, row = source symbol.
using CountMatrix = std::vector<std::vector<std::uint64_t>>;

inline CountMatrix bigram_counts(const SymbolSequence& seq, const Alphabet& alphabet,
                                 bool collapse = true) {
  if (seq.empty()) throw DegenerateInputError("sequence too short: empty");
  const SymbolSequence work = collapse ? collapse_duplicates(seq) : seq;
  if (work.size() < 2) {
    throw DegenerateInputError("sequence too short: " + std::to_string(work.size()) +
                               " item(s) after collapsing, need 2");
  }
  const auto idx = encode(work, alphabet);
  CountMatrix m(alphabet.size(), std::vector<std::uint64_t>(alphabet.size(), 0));
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) ++m[idx[i]][idx[i + 1]];
  return m;
}

inline void accumulate(CountMatrix& into, const CountMatrix& from) {
  if (into.empty()) {
    into = from;
    return;
  }
  if (into.size() != from.size()) throw std::invalid_argument("bigram matrix size mismatch");
  for (std::size_t i = 0; i < into.size(); ++i) {
    for (std::size_t j = 0; j < into[i].size(); ++j) into[i][j] += from[i][j];
  }
}

}  // namespace mirlab
