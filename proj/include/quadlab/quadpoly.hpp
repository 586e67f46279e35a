#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace quadlab {

using Vec3 = std::array<double, 3>;

//! f(x,y,z) = a xy + b xz + c yz + d x^2 + e y^2 + g z^2 + h x + i y + j z.
//! The coefficient letters follow the usual ordering of this family; there is
//! no constant term.
struct QuadPoly
{
  double a = 0, b = 0, c = 0;
  double d = 0, e = 0, g = 0;
  double h = 0, i = 0, j = 0;

  //! Throws InvalidArgument when any coefficient is not finite.
  static QuadPoly make(double a, double b, double c, double d, double e,
                       double g, double h, double i, double j);
  static QuadPoly from_array(const std::array<double, 9>& coef);

  std::array<double, 9> coefficients() const;

  //! Symmetric Hessian [[2d,a,b],[a,2e,c],[b,c,2g]]; f(u) = u^T H u / 2 + b.u.
  Eigen::Matrix3d hessian() const;
  Vec3 linear_part() const { return { h, i, j }; }

  bool operator==(const QuadPoly&) const = default;
};

//! Relabels variables: the returned polynomial p satisfies
//! p(u[perm[0]], u[perm[1]], u[perm[2]]) == f(u) for every u.
QuadPoly permute_variables(const QuadPoly& f, const std::array<int, 3>& perm);

std::vector<std::string> preset_names();
//! Presets: "x+yz", "x+(y+z)^2", "x+(y-z)^2", "sum-of-squares".
QuadPoly preset(std::string_view name);

double evaluate(const QuadPoly& f, const Vec3& u);
Vec3 gradient(const QuadPoly& f, const Vec3& u);

// ---------------------------------------------------------------------------
// Critical set K = {grad f = 0}

struct CriticalSet
{
  enum class Kind { Empty, Point, Line };
  Kind kind = Kind::Empty;
  Vec3 point{};      // valid unless kind == Empty
  Vec3 direction{};  // unit vector, valid when kind == Line
  int rank = 0;      // numerical rank of the Hessian
};

std::string_view to_string(CriticalSet::Kind kind);

//! Numerical rank with singular-value threshold rel_tol * sigma_max.
int hessian_rank(const QuadPoly& f, double rel_tol = 1e-9);

//! Solves H u = -b. tol_lin defaults to 1e-9 (1 + |b|).
//! Throws RankDeficient when rank(H) <= 1 and the system is consistent (the
//! solution set is then a plane, which no non-degenerate f produces).
CriticalSet critical_set(const QuadPoly& f,
                         std::optional<double> tol_lin = std::nullopt);

// ---------------------------------------------------------------------------
// Jacobian polynomials and classification

//! Affine polynomial cx x + cy y + cz z + c0.
struct Affine3
{
  double cx = 0, cy = 0, cz = 0, c0 = 0;

  bool is_zero() const { return cx == 0 && cy == 0 && cz == 0 && c0 == 0; }
  double operator()(const Vec3& u) const
  {
    return cx * u[0] + cy * u[1] + cz * u[2] + c0;
  }
};

//! J_x = det[[f_y, f_z], [f_xy, f_xz]], J_y = det[[f_x, f_z], [f_xy, f_yz]],
//! J_z = det[[f_x, f_y], [f_xz, f_yz]], expanded exactly. The coefficient of
//! the distinguished variable cancels identically; it is kept in the
//! expansion and must come out as exactly zero.
struct JacobianPolys
{
  Affine3 jx, jy, jz;

  bool all_zero() const { return jx.is_zero() && jy.is_zero() && jz.is_zero(); }
};

JacobianPolys jacobian_polynomials(const QuadPoly& f);

enum class Classification { Degenerate, NonDegenerate, MissingVariable };
std::string_view to_string(Classification c);

//! True when some partial derivative vanishes identically.
bool has_missing_variable(const QuadPoly& f);

//! Structural test for f = G(I(x) + J(y) + K(z)): either f is additive
//! (a = b = c = 0) or its quadratic part has rank one and the linear part is
//! parallel to the same direction. Exact coefficient comparisons.
bool structurally_degenerate(const QuadPoly& f);

//! The Jacobian test decides; the structural test must agree or
//! StructuralMismatch is thrown.
Classification classify(const QuadPoly& f);

// ---------------------------------------------------------------------------
// Two-variable quadratics and their canonical forms

//! Q(u,v) = uu u^2 + uv u v + vv v^2 + lu u + lv v + c0.
struct Quad2
{
  double uu = 0, uv = 0, vv = 0, lu = 0, lv = 0, c0 = 0;

  double operator()(double u, double v) const
  {
    return uu * u * u + uv * u * v + vv * v * v + lu * u + lv * v + c0;
  }
  //! Determinant of the symmetric matrix [[uu, uv/2], [uv/2, vv]].
  double det() const { return uu * vv - 0.25 * uv * uv; }
};

enum class CanonicalKind { ProductUV, SumSquares, DiffSquares };
std::string_view to_string(CanonicalKind k);

double canonical_value(CanonicalKind kind, double s, double t);

//! Q(x) = scale * Q_can(B (x - shift)) + offset.
struct CanonicalReduction
{
  CanonicalKind kind = CanonicalKind::SumSquares;
  std::array<std::array<double, 2>, 2> B{};
  std::array<double, 2> shift{};
  double scale = 1;
  double offset = 0;

  double operator()(double u, double v) const;
  double det_B() const { return B[0][0] * B[1][1] - B[0][1] * B[1][0]; }
};

//! Indefinite forms go to DiffSquares unless Q is already a multiple of uv;
//! negative definite forms come back as SumSquares with scale < 0.
//! Throws DegenerateForm when |det A| <= tol.
CanonicalReduction reduce_rank2(const Quad2& q, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Line pencils and the separation form J

//! The family of lines X = m(p,q) Y + k(p,q) in the (X, Y) plane with
//! m = mp p + mq q and k = kpq p q + kpp p^2 + kqq q^2 + kp p + kq q.
struct LinePencil
{
  double mp = 0, mq = 0;
  double kpq = 0, kpp = 0, kqq = 0, kp = 0, kq = 0;

  double slope(double p, double q) const { return mp * p + mq * q; }
  double intercept(double p, double q) const
  {
    return kpq * p * q + kpp * p * p + kqq * q * q + kp * p + kq * q;
  }
};

//! Pairs (x, z): X = (ax + cz) Y + (bxz + dx^2 + gz^2 + hx + jz).
//! Throws AllZeroAxis when a = c = 0.
LinePencil pencil_xz(const QuadPoly& f);
//! Switched variant for a = c = 0, pairs (x, y):
//! X = (bx) Z + (dx^2 + ey^2 + hx + iy).
LinePencil pencil_xy_switched(const QuadPoly& f);

//! J(p,q) = A p + B q + C.
struct LinearFormJ
{
  double A = 0, B = 0, C = 0;

  double operator()(double p, double q) const { return A * p + B * q + C; }
};

//! (A, B, C) = (ab - 2cd, 2ag - cb, aj - ch). Throws AllZeroAxis when
//! a = c = 0; the caller then uses linear_form_J(pencil_xy_switched(f)).
LinearFormJ linear_form_J(const QuadPoly& f);
//! Same form for an arbitrary pencil: J = det d(m, k) / d(p, q).
LinearFormJ linear_form_J(const LinePencil& pencil);

} // namespace quadlab
