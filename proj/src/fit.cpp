#include "quadlab/fit.hpp"

#include <algorithm>
#include <cmath>

#include "quadlab/error.hpp"

namespace quadlab {

FitResult fit_exponent(const std::vector<std::pair<double, double>>& pairs)
{
  if (pairs.size() < 3)
    fail(ErrorCode::InsufficientData, "need at least 3 (delta, value) pairs");
  const std::size_t n = pairs.size();
  std::vector<double> X(n), Y(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto [d, v] = pairs[k];
    if (!(d > 0) || !(v > 0) || !std::isfinite(d) || !std::isfinite(v))
      fail(ErrorCode::NonPositiveValue, "delta and value must be positive and finite");
    X[k] = std::log2(d);
    Y[k] = std::log2(v);
  }
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += X[k];
    my += Y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (X[k] - mx) * (X[k] - mx);
    sxy += (X[k] - mx) * (Y[k] - my);
    syy += (Y[k] - my) * (Y[k] - my);
  }
  if (!(sxx > 0))
    fail(ErrorCode::InsufficientData, "all deltas coincide");

  FitResult r;
  r.n = n;
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  double sse = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double e = Y[k] - (r.intercept + r.slope * X[k]);
    sse += e * e;
  }
  r.r_squared = syy > 0 ? std::clamp(1 - sse / syy, 0.0, 1.0) : 1.0;
  r.slope_stderr = n > 2 ? std::sqrt(sse / (n - 2) / sxx) : 0;
  return r;
}

} // namespace quadlab
