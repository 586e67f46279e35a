#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "quadlab/quadpoly.hpp"

namespace quadlab {

struct Point2
{
  double x = 0, y = 0;
};

//! The line {t (cos th, sin th) + a (-sin th, cos th)}. Canonical form:
//! a >= 0, th in [0, 2 pi), and th in [0, pi) when a == 0.
struct PlanarLine
{
  double theta = 0;
  double a = 0;

  static PlanarLine canonical(double theta, double a);
  //! X = m Y + k in the (X, Y) plane.
  static PlanarLine from_slope_intercept(double m, double k);

  //! Euclidean distance |-sin th x + cos th y - a|.
  double distance(const Point2& p) const;
  //! X coordinate of the line at height Y (the line is never horizontal when
  //! built from a slope/intercept pair).
  double x_at(double y) const;
};

//! sqrt((cos th - cos th')^2 + (sin th - sin th')^2)
//!   + sqrt((-a sin th + a' sin th')^2 + (a cos th - a' cos th')^2)
double line_metric(const PlanarLine& l1, const PlanarLine& l2);

struct PointSet2D
{
  std::vector<Point2> points;
  std::vector<std::int64_t> multiplicity;

  std::size_t size() const { return points.size(); }
  std::int64_t total() const;
  std::int64_t max_multiplicity() const;
};

struct LineFamily
{
  std::vector<PlanarLine> lines;
  std::vector<std::int64_t> multiplicity;
  //! (p, q) parameter pair per line when the family came from a pencil.
  std::vector<std::pair<double, double>> provenance;

  std::size_t size() const { return lines.size(); }
  void add(const PlanarLine& l, std::int64_t mult = 1);
};

struct PencilLine
{
  PlanarLine line;
  double slope = 0;
  double intercept = 0;
};

PencilLine line_from_pencil(const LinePencil& pencil, double p, double q);
//! X = (ax + cz) Y + (bxz + dx^2 + gz^2 + hx + jz). Throws AllZeroAxis when
//! a = c = 0; line_from_pair_switched then gives X = (bx) Z + (dx^2 + ey^2 + hx + iy).
PencilLine line_from_pair(const QuadPoly& f, double x, double z);
PencilLine line_from_pair_switched(const QuadPoly& f, double x, double y);

//! Lines of a pencil over every pair in M x M.
LineFamily pencil_family(const LinePencil& pencil, const std::vector<double>& M);

using Planar2Fn = std::function<double(double, double)>;

//! P = {(F(x, y), y) : x, y in M}. Points on the same fiber whose first
//! coordinates differ by at most 1e-15 (1 + |X|) are merged.
PointSet2D phi_point_set(const Planar2Fn& F, const std::vector<double>& M);

struct Distortion
{
  double lower = 0;
  double upper = 0;
  bool sampled = false;
  std::uint64_t pairs = 0;
};

//! min / max of |Phi(p) - Phi(q)| / |p - q| over distinct p, q in M x M.
//! Exact when the pair count is <= 1e8, otherwise 1e6 pairs drawn with seed.
Distortion bilipschitz_distortion(const Planar2Fn& F, const std::vector<double>& M,
                                  std::uint64_t seed = 0);

//! Multiplicity-weighted count of (p, l) with distance(l, p) <= delta.
std::int64_t count_incidences_brute(const PointSet2D& P, const LineFamily& L, double delta);
//! Same predicate; points bucketed in cells of pitch delta and each tube
//! walked column by column (or row by row for steep lines).
std::int64_t count_incidences(const PointSet2D& P, const LineFamily& L, double delta);

//! Greedy first fit in input order; a line of multiplicity k counts as k
//! copies. Within a class every pair is at metric distance >= rho.
std::vector<LineFamily> separate_lines(const LineFamily& L, double rho);

struct OmegaSplit
{
  std::vector<std::pair<double, double>> omega_prime;        // |J| <= delta^gamma
  std::vector<std::pair<double, double>> omega_doubleprime;  // the rest
  LinearFormJ J;
  double threshold = 0;       // delta^gamma
  double budget = 0;          // delta^{gamma alpha} |M|^2
  std::size_t slabs_nominal = 0;   // ceil(2 / delta^gamma)
  std::size_t slabs_occupied = 0;  // slabs of width delta^gamma across (A, B) met by Omega''
  std::size_t vertical_lines = 0;  // pairs in Omega'' with slope 0
};

OmegaSplit tube_split_omega(const LinePencil& pencil, const std::vector<double>& M, double gamma,
                            double delta, double alpha);
//! Throws AllZeroAxis when a = c = 0.
OmegaSplit tube_split_omega(const QuadPoly& f, const std::vector<double>& M, double gamma,
                            double delta, double alpha);

//! sum over c in C of #{(a1, a2, b1, b2) : |(a1 + c b1) - (a2 + c b2)| <= delta}.
//! Throws BudgetExceeded when |A| |B| > 1e7.
std::uint64_t sum_energy_count(const std::vector<double>& A, const std::vector<double>& B,
                               const std::vector<double>& C, double delta);

struct CollinearityWitness
{
  bool incidences_hold = false; // all three residuals <= delta
  double lambda = 0;            // (v - y0) / (y1 - y0)
  double combination_error = 0; // (1 - lambda) z0 + lambda z1 - u
  double bound = 0;             // 2 (1 + |v - y0|) delta^{1 - 3 eps/alpha}
  bool pass = false;
};

//! Given a line z = m y + k and points (u, v), (z0, y0), (z1, y1), checks that
//! delta-incidence of all three forces the combination error under the bound.
//! Throws FiberTooClose when |y1 - y0| < delta^{3 eps/alpha}.
CollinearityWitness collinearity_witness(double u, double v, double z0, double y0, double z1,
                                         double y1, double m, double k, double delta,
                                         double eps_over_alpha);

//! Explicit separation constant for lines of a pencil over a convex
//! Omega in [0,1]^2 with min |J| >= delta^gamma:
//!   d(l, l~) >= c_f delta^{1+gamma} whenever |(p,q) - (p~,q~)| >= delta.
struct SeparationConstant
{
  double c_f = 0;
  double c0 = 0;
  double M = 0;      // max |m| on [0,1]^2
  double K_max = 0;  // bound for |k| on [0,1]^2
  double C_f = 0;    // max |d k / d e1| on [-1,2]^2
  double norm_u = 0; // |(mp, mq)|
  double norm_AB = 0;
};

//! Throws AllZeroAxis when the slope part vanishes.
SeparationConstant separation_constant(const LinePencil& pencil);

} // namespace quadlab
