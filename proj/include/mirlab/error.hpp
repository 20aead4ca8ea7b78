#pragma once

#include <stdexcept>
#include <string>

namespace mirlab {

// Raised when an input is structurally valid but too small or too uniform
// for the requested statistic (empty sequences, a single distinct symbol,
// sub-threshold sample sizes).
class DegenerateInputError : public std::invalid_argument {
 public:
  explicit DegenerateInputError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when a tempo curve is shorter than the classifier's minimum
// sample count. Callers that batch curves use it to build exclusion lists.
class ExcludedCurveError : public DegenerateInputError {
 public:
  explicit ExcludedCurveError(const std::string& what)
      : DegenerateInputError(what) {}
};

}  // namespace mirlab
