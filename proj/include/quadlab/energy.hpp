#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "quadlab/kernel.hpp"
#include "quadlab/measure.hpp"
#include "quadlab/quadpoly.hpp"

namespace quadlab {

//! Mass per bin; bin m covers [offset + m w, offset + (m + 1) w).
//! Only occupied bins are stored, in increasing order. The value range of a
//! pushforward can reach ~1/delta^2 bins, so a dense array is not an option.
struct BinnedDistribution
{
  double bin_width = 1;
  double offset = 0;
  std::vector<std::int64_t> bins;
  std::vector<double> mass;

  double total() const;
  std::size_t size() const { return bins.size(); }
  double mass_at(std::int64_t bin) const;
  //! Dense copy from the first to the last occupied bin.
  std::pair<std::int64_t, std::vector<double>> dense() const;
};

//! N^3 must stay within 2^30.
constexpr std::uint64_t triple_budget = std::uint64_t{ 1 } << 30;

//! Number of times a triple enumeration (pushforward, split, tube) has run.
std::uint64_t energy_pipeline_calls();

//! nu = f_#(mu x mu x mu), binned at width bin_width (default mu.delta()).
//! The result does not depend on the worker count.
//! Throws TripleBudgetExceeded when N^3 > 2^30.
BinnedDistribution pushforward(const QuadPoly& f, const DiscreteMeasure& mu,
                               std::optional<double> bin_width = std::nullopt);

//! ||phi_delta * nu||_2^2 = sum_{m,m'} nu_m nu_m' K_delta((m - m') w).
//! Requires delta == nu.bin_width.
double smoothed_energy(const BinnedDistribution& nu, double delta,
                       const SmoothingKernel& kernel = SmoothingKernel::bump());

//! sum_m a_m (b_{m-2} + ... + b_{m+2}).
double window_pair_sum(const BinnedDistribution& a, const BinnedDistribution& b);

//! (mu^3 x mu^3){|f - f'| <= 2 delta}, evaluated through bins of width delta
//! as sum_m h_m (h_{m-2} + ... + h_{m+2}). Pairs whose bins differ by at
//! most 2 are counted, so the result lies between the exact measure of
//! {|f - f'| <= 2 delta} and that of {|f - f'| < 3 delta}.
double coincidence_integral(const QuadPoly& f, const DiscreteMeasure& mu, double delta);

//! I0 counts pairs with |grad f| <= delta^kappa at both ends (Euclidean).
//! I1, I2, I3 count pairs whose second triple has |f_x|, |f_y|, |f_z| above
//! delta^kappa / sqrt 3; I4, I5, I6 put the same condition on the first
//! triple. Any pair outside I0 has one end with a component above the
//! threshold, so total <= I0 + ... + I6.
struct CoincidenceSplit
{
  double I[7] = {};
  double total = 0;
  double kappa = 0;

  double sum() const;
};

CoincidenceSplit coincidence_split(const QuadPoly& f, const DiscreteMeasure& mu, double delta,
                                   double kappa);

//! Point p (no direction) or affine line p + t dir (dir is normalised here).
struct TubeGeometry
{
  Vec3 point{};
  std::optional<Vec3> direction;
};

//! (mu x mu x mu) of the closed r-neighbourhood of the geometry.
double tube_mass(const DiscreteMeasure& mu, const TubeGeometry& geom, double r);

//! (mu x mu){|Q(u, v) - t| <= delta}.
double sublevel_mass(const Quad2& q, const DiscreteMeasure& mu, double t, double delta);

struct SublevelProfile
{
  double sup_mass = 0;
  double argmax_t = 0;
};

//! Scans t over the multiples of delta covering the range of Q on the support.
//! Throws DegenerateForm when Q has rank below two.
SublevelProfile sublevel_mass_profile(const Quad2& q, const DiscreteMeasure& mu, double delta);

//! Largest 5-bin window sum of nu.
double slice_mass_sup(const BinnedDistribution& nu);
double slice_mass_sup(const QuadPoly& f, const DiscreteMeasure& mu, double delta);

} // namespace quadlab
