#pragma once

#include <optional>
#include <string>
#include <vector>

#include "quadlab/kernel.hpp"
#include "quadlab/measure.hpp"
#include "quadlab/quadpoly.hpp"
#include "quadlab/report.hpp"

namespace quadlab {

enum class ConstructionKind { FrostmanNecessity, UnboundedSupport, DivergentEnergy };

std::string to_string(ConstructionKind k);
//! Accepts the names printed by to_string; throws ParseError otherwise.
ConstructionKind construction_kind_from_string(const std::string& s);

struct ConstructionSpec
{
  ConstructionKind kind = ConstructionKind::FrostmanNecessity;
  double alpha = 0.25;
  //! Width factor of S = [0, c delta]; defaults to the kernel's construction_c().
  std::optional<double> c;
  double p_S = 0.5;
  double p_A = 0.5;
  double c1 = 1.0 / 32;
  //! Depth of the fixed Cantor measure used by DivergentEnergy.
  int cantor_depth = 5;
  //! Throw DeltaTooLarge instead of reporting an inadmissible delta.
  bool strict = false;
};

//! 8 c1 delta^{3/2 - alpha} + 4 delta^2 <= (eta / 16) delta
struct Admissibility
{
  double lhs = 0;
  double rhs = 0;
  bool admissible = false;
};

Admissibility frostman_necessity_admissibility(double alpha, double delta, double c1, double eta);

//! p_S * uniform[0, c delta] + p_A * uniform on U(delta), where
//! U = {n delta^{1/2} : 0 <= n <= delta^{-alpha}} fattened by delta/2 and
//! clipped to [0, 1]. Lebesgue mass is assigned to delta-grid cells.
//! Requires alpha in (0, 1/2), c in (0, 1/4), p_S + p_A = 1.
DiscreteMeasure build_frostman_necessity(double alpha, double delta, double c, double p_S,
                                         double p_A);

//! Normalised Lebesgue measure on U(delta) u V(delta) u (-V)(delta) with
//! U = {n delta^{1/2} : 0 <= n <= delta^{-1/2}}, V = {1 / (k delta) : 1 <= k <= delta^{-1/2}},
//! every point fattened by delta/2. Requires delta = 2^{-even}.
DiscreteMeasure build_unbounded_support(double delta);

//! Disjoint intervals [x, x + delta/2] anchored greedily from the left at atoms.
struct HalfIntervalFamily
{
  double length = 0;
  std::vector<double> starts;
  std::vector<double> masses;

  std::size_t size() const { return starts.size(); }
};

HalfIntervalFamily half_interval_family(const DiscreteMeasure& mu, double delta);

//! x + (y+z)^2, x + yz and x + (y-z)^2 respectively.
QuadPoly construction_poly(ConstructionKind k);
//! alpha - 1, -1/2 and 2 alpha - 1 respectively.
double claimed_exponent(ConstructionKind k, double alpha);

//! Measure of the construction at scale delta (DivergentEnergy ignores delta).
DiscreteMeasure build_construction(const ConstructionSpec& spec, double delta);

//! Builds the construction per delta, bins the pushforward at width delta and
//! fits log2 energy against log2 delta. Verdict Pass when
//! slope <= claimed + tol_fit and every ratio energy / delta^claimed is at
//! least a quarter of the ratio at the largest delta.
//! Needs at least 4 deltas.
ScanReport verify_lower_bound(const ConstructionSpec& spec, const std::vector<double>& ladder,
                              const QuadPoly& f,
                              const SmoothingKernel& kernel = SmoothingKernel::bump(),
                              bool timing = false);

} // namespace quadlab
