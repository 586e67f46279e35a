#pragma once

#include <utility>
#include <vector>

namespace quadlab {

struct FitResult
{
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  double slope_stderr = 0; // 0 when there are only two points
  std::size_t n = 0;
};

//! Ordinary least squares of log2(value) on log2(delta).
//! Throws InsufficientData below 3 pairs and NonPositiveValue when a delta or
//! value is not strictly positive.
FitResult fit_exponent(const std::vector<std::pair<double, double>>& pairs);

} // namespace quadlab
