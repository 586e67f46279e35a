#include "quadlab/kernel.hpp"

#include <algorithm>
#include <cmath>

namespace quadlab {

namespace {

double raw_bump(double t)
{
  const double q = 1 - t * t;
  return q > 0 ? std::exp(-1 / q) : 0;
}

constexpr int table_size = 1025;
constexpr int panels = 4096;

} // namespace

const SmoothingKernel& SmoothingKernel::bump()
{
  static const SmoothingKernel k;
  return k;
}

SmoothingKernel::SmoothingKernel()
{
  norm_ = simpson(raw_bump, -1, 1, panels);
  table_.resize(table_size);
  for (int k = 0; k < table_size; ++k) {
    const double s = k * lattice_step();
    // overlap of supp phi and supp phi(. - s)
    const double lo = s - 1, hi = 1;
    if (lo >= hi) {
      table_[k] = 0;
      continue;
    }
    table_[k] = simpson([&](double t) { return profile(t) * profile(t - s); }, lo, hi, panels);
  }
  table_.back() = 0;

  int last = 0;
  while (last + 1 < table_size && table_[last + 1] >= c0()) ++last;
  eta_ = last * lattice_step();
}

double SmoothingKernel::profile(double t) const
{
  return raw_bump(t) / norm_;
}

double SmoothingKernel::autocorrelation(double u) const
{
  const double x = std::abs(u) / lattice_step();
  if (x >= table_size - 1) return 0;
  const int k = static_cast<int>(x);
  const double frac = x - k;
  if (frac == 0) return table_[k];
  return table_[k] * (1 - frac) + table_[k + 1] * frac;
}

double SmoothingKernel::construction_c() const
{
  return std::min(eta_ / 16, 0.125);
}

} // namespace quadlab
