#pragma once

#include <vector>

namespace quadlab {

//! phi(t) = exp(-1 / (1 - t^2)) / Z on (-1, 1), unit integral, and its
//! autocorrelation K = phi * phi~ supported on [-2, 2].
//! K is tabulated at s = k / 512, 0 <= k <= 1024, by composite Simpson.
class SmoothingKernel
{
public:
  static const SmoothingKernel& bump();

  double profile(double t) const;
  //! Linear interpolation of the table; exact at lattice points.
  double autocorrelation(double u) const;

  double K0() const { return table_[0]; }
  //! K >= c0 on [-eta, eta], c0 = K(0) / 2, eta the largest lattice value
  //! for which that holds.
  double c0() const { return 0.5 * table_[0]; }
  double eta() const { return eta_; }
  double support_radius() const { return 2; }
  double lattice_step() const { return 1.0 / 512; }
  const std::vector<double>& table() const { return table_; }
  //! Width of the S block in the mixture construction: min(eta / 16, 1/8).
  double construction_c() const;

private:
  SmoothingKernel();

  double norm_ = 1;
  double eta_ = 0;
  std::vector<double> table_;
};

//! Composite Simpson on [lo, hi] with an even number of panels.
template <typename F>
double simpson(F f, double lo, double hi, int panels)
{
  if (panels % 2) ++panels;
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) s += (k % 2 ? 4 : 2) * f(lo + k * h);
  return s * h / 3;
}

} // namespace quadlab
