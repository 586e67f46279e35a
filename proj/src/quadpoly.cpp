#include "quadlab/quadpoly.hpp"

#include <cmath>

#include "quadlab/error.hpp"

namespace quadlab {

namespace {

// symmetric access to the coefficient table of f
double cross_coef(const QuadPoly& f, int p, int q)
{
  if (p > q) std::swap(p, q);
  if (p == 0 && q == 1) return f.a;
  if (p == 0 && q == 2) return f.b;
  return f.c;
}

double square_coef(const QuadPoly& f, int p)
{
  return p == 0 ? f.d : (p == 1 ? f.e : f.g);
}

double linear_coef(const QuadPoly& f, int p)
{
  return p == 0 ? f.h : (p == 1 ? f.i : f.j);
}

Affine3 combine(double s, const Affine3& P, double t, const Affine3& Q)
{
  return { s * P.cx - t * Q.cx, s * P.cy - t * Q.cy, s * P.cz - t * Q.cz,
           s * P.c0 - t * Q.c0 };
}

} // namespace

QuadPoly QuadPoly::make(double a, double b, double c, double d, double e,
                        double g, double h, double i, double j)
{
  return from_array({ a, b, c, d, e, g, h, i, j });
}

QuadPoly QuadPoly::from_array(const std::array<double, 9>& k)
{
  for (double v : k)
    if (!std::isfinite(v))
      fail(ErrorCode::InvalidArgument, "polynomial coefficient is not finite");
  return QuadPoly{ k[0], k[1], k[2], k[3], k[4], k[5], k[6], k[7], k[8] };
}

std::array<double, 9> QuadPoly::coefficients() const
{
  return { a, b, c, d, e, g, h, i, j };
}

Eigen::Matrix3d QuadPoly::hessian() const
{
  Eigen::Matrix3d H;
  H << 2 * d, a, b,
       a, 2 * e, c,
       b, c, 2 * g;
  return H;
}

QuadPoly permute_variables(const QuadPoly& f, const std::array<int, 3>& perm)
{
  std::array<bool, 3> seen{};
  for (int p : perm) {
    if (p < 0 || p > 2 || seen[p])
      fail(ErrorCode::InvalidArgument, "perm must be a permutation of 0,1,2");
    seen[p] = true;
  }
  QuadPoly r;
  r.a = cross_coef(f, perm[0], perm[1]);
  r.b = cross_coef(f, perm[0], perm[2]);
  r.c = cross_coef(f, perm[1], perm[2]);
  r.d = square_coef(f, perm[0]);
  r.e = square_coef(f, perm[1]);
  r.g = square_coef(f, perm[2]);
  r.h = linear_coef(f, perm[0]);
  r.i = linear_coef(f, perm[1]);
  r.j = linear_coef(f, perm[2]);
  return r;
}

std::vector<std::string> preset_names()
{
  return { "x+yz", "x+(y+z)^2", "x+(y-z)^2", "sum-of-squares" };
}

QuadPoly preset(std::string_view name)
{
  QuadPoly f;
  if (name == "x+yz") {
    f.h = 1;
    f.c = 1;
  } else if (name == "x+(y+z)^2") {
    f.h = 1;
    f.e = 1;
    f.g = 1;
    f.c = 2;
  } else if (name == "x+(y-z)^2") {
    f.h = 1;
    f.e = 1;
    f.g = 1;
    f.c = -2;
  } else if (name == "sum-of-squares") {
    f.d = 1;
    f.e = 1;
    f.g = 1;
  } else {
    fail(ErrorCode::InvalidArgument, "unknown preset '" + std::string(name) + "'");
  }
  return f;
}

double evaluate(const QuadPoly& f, const Vec3& u)
{
  const double x = u[0], y = u[1], z = u[2];
  return f.a * x * y + f.b * x * z + f.c * y * z + f.d * x * x + f.e * y * y +
         f.g * z * z + f.h * x + f.i * y + f.j * z;
}

Vec3 gradient(const QuadPoly& f, const Vec3& u)
{
  const double x = u[0], y = u[1], z = u[2];
  return { 2 * f.d * x + f.a * y + f.b * z + f.h,
           f.a * x + 2 * f.e * y + f.c * z + f.i,
           f.b * x + f.c * y + 2 * f.g * z + f.j };
}

std::string_view to_string(CriticalSet::Kind kind)
{
  switch (kind) {
  case CriticalSet::Kind::Empty: return "Empty";
  case CriticalSet::Kind::Point: return "Point";
  case CriticalSet::Kind::Line: return "Line";
  }
  return "?";
}

int hessian_rank(const QuadPoly& f, double rel_tol)
{
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(f.hessian());
  const auto& s = svd.singularValues();
  if (s(0) == 0) return 0;
  int r = 0;
  for (int k = 0; k < 3; ++k)
    if (s(k) > rel_tol * s(0)) ++r;
  return r;
}

CriticalSet critical_set(const QuadPoly& f, std::optional<double> tol_lin)
{
  const Eigen::Matrix3d H = f.hessian();
  const Eigen::Vector3d b(f.h, f.i, f.j);
  const double tol = tol_lin.value_or(1e-9 * (1 + b.norm()));

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int rank = 0;
  if (s(0) > 0)
    for (int k = 0; k < 3; ++k)
      if (s(k) > 1e-9 * s(0)) ++rank;

  // truncated pseudo-inverse solution of H p = -b
  Eigen::Vector3d rhs = svd.matrixU().transpose() * (-b);
  Eigen::Vector3d y = Eigen::Vector3d::Zero();
  for (int k = 0; k < rank; ++k) y(k) = rhs(k) / s(k);
  const Eigen::Vector3d p = svd.matrixV() * y;
  const double residual = (H * p + b).norm();

  CriticalSet out;
  out.rank = rank;
  if (residual > tol) {
    out.kind = CriticalSet::Kind::Empty;
    return out;
  }
  if (rank <= 1)
    fail(ErrorCode::RankDeficient,
         "Hessian rank " + std::to_string(rank) + " with a consistent gradient system");

  out.point = { p(0), p(1), p(2) };
  if (rank == 3) {
    out.kind = CriticalSet::Kind::Point;
    return out;
  }
  Eigen::Vector3d dir = svd.matrixV().col(2).normalized();
  for (int k = 0; k < 3; ++k) {
    if (std::abs(dir(k)) > 1e-12) {
      if (dir(k) < 0) dir = -dir;
      break;
    }
  }
  out.kind = CriticalSet::Kind::Line;
  out.direction = { dir(0), dir(1), dir(2) };
  return out;
}

JacobianPolys jacobian_polynomials(const QuadPoly& f)
{
  const Affine3 fx{ 2 * f.d, f.a, f.b, f.h };
  const Affine3 fy{ f.a, 2 * f.e, f.c, f.i };
  const Affine3 fz{ f.b, f.c, 2 * f.g, f.j };
  // second derivatives are constants: f_xy = a, f_xz = b, f_yz = c
  JacobianPolys J;
  J.jx = combine(f.b, fy, f.a, fz);
  J.jy = combine(f.c, fx, f.a, fz);
  J.jz = combine(f.c, fx, f.b, fy);
  return J;
}

std::string_view to_string(Classification c)
{
  switch (c) {
  case Classification::Degenerate: return "Degenerate";
  case Classification::NonDegenerate: return "NonDegenerate";
  case Classification::MissingVariable: return "MissingVariable";
  }
  return "?";
}

bool has_missing_variable(const QuadPoly& f)
{
  const bool no_x = f.d == 0 && f.a == 0 && f.b == 0 && f.h == 0;
  const bool no_y = f.a == 0 && f.e == 0 && f.c == 0 && f.i == 0;
  const bool no_z = f.b == 0 && f.c == 0 && f.g == 0 && f.j == 0;
  return no_x || no_y || no_z;
}

bool structurally_degenerate(const QuadPoly& f)
{
  if (f.a == 0 && f.b == 0 && f.c == 0) return true;

  const double S[3][3] = { { 2 * f.d, f.a, f.b },
                           { f.a, 2 * f.e, f.c },
                           { f.b, f.c, 2 * f.g } };
  for (int r0 = 0; r0 < 3; ++r0)
    for (int r1 = r0 + 1; r1 < 3; ++r1)
      for (int c0 = 0; c0 < 3; ++c0)
        for (int c1 = c0 + 1; c1 < 3; ++c1)
          if (S[r0][c0] * S[r1][c1] != S[r0][c1] * S[r1][c0]) return false;

  // rank one: the linear part must lie on the row direction
  const double L[3] = { f.h, f.i, f.j };
  for (int r = 0; r < 3; ++r)
    for (int c0 = 0; c0 < 3; ++c0)
      for (int c1 = c0 + 1; c1 < 3; ++c1)
        if (S[r][c0] * L[c1] != S[r][c1] * L[c0]) return false;
  return true;
}

Classification classify(const QuadPoly& f)
{
  if (has_missing_variable(f)) return Classification::MissingVariable;
  const bool jac = jacobian_polynomials(f).all_zero();
  const bool structural = structurally_degenerate(f);
  if (jac != structural)
    fail(ErrorCode::StructuralMismatch,
         std::string("Jacobian test says ") + (jac ? "degenerate" : "non-degenerate") +
           ", structural test disagrees");
  return jac ? Classification::Degenerate : Classification::NonDegenerate;
}

std::string_view to_string(CanonicalKind k)
{
  switch (k) {
  case CanonicalKind::ProductUV: return "ProductUV";
  case CanonicalKind::SumSquares: return "SumSquares";
  case CanonicalKind::DiffSquares: return "DiffSquares";
  }
  return "?";
}

double canonical_value(CanonicalKind kind, double s, double t)
{
  switch (kind) {
  case CanonicalKind::ProductUV: return s * t;
  case CanonicalKind::SumSquares: return s * s + t * t;
  case CanonicalKind::DiffSquares: return s * s - t * t;
  }
  return 0;
}

double CanonicalReduction::operator()(double u, double v) const
{
  const double y0 = u - shift[0], y1 = v - shift[1];
  const double s = B[0][0] * y0 + B[0][1] * y1;
  const double t = B[1][0] * y0 + B[1][1] * y1;
  return scale * canonical_value(kind, s, t) + offset;
}

CanonicalReduction reduce_rank2(const Quad2& q, double tol)
{
  const double det = q.det();
  if (!(std::abs(det) > tol))
    fail(ErrorCode::DegenerateForm,
         "|det A| = " + std::to_string(std::abs(det)) + " <= tol");

  CanonicalReduction r;
  if (q.uu == 0 && q.vv == 0) {
    r.kind = CanonicalKind::ProductUV;
    r.scale = q.uv;
    r.B = { { { 1, 0 }, { 0, 1 } } };
    r.shift = { -q.lv / q.uv + 0.0, -q.lu / q.uv + 0.0 };
    r.offset = q.c0 - q.lu * q.lv / q.uv;
    return r;
  }

  // x0 = -A^{-1} l / 2 with A = [[uu, uv/2], [uv/2, vv]]
  const double h = 0.5 * q.uv;
  const double x0 = -0.5 * (q.vv * q.lu - h * q.lv) / det;
  const double y0 = -0.5 * (q.uu * q.lv - h * q.lu) / det;
  r.shift = { x0, y0 };
  r.offset = q(x0, y0);

  Eigen::Matrix2d A;
  A << q.uu, h, h, q.vv;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
  const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
  const Eigen::Vector2d v_lo = es.eigenvectors().col(0);
  const Eigen::Vector2d v_hi = es.eigenvectors().col(1);

  const double mag = std::sqrt(std::abs(lo * hi));
  if (lo > 0) {
    r.kind = CanonicalKind::SumSquares;
    r.scale = mag;
  } else if (hi < 0) {
    r.kind = CanonicalKind::SumSquares;
    r.scale = -mag;
  } else {
    r.kind = CanonicalKind::DiffSquares;
    r.scale = mag;
  }
  // s carries the larger eigenvalue so the negative one lands on t
  const double w0 = std::sqrt(std::abs(hi) / mag);
  const double w1 = std::sqrt(std::abs(lo) / mag);
  r.B = { { { w0 * v_hi(0), w0 * v_hi(1) }, { w1 * v_lo(0), w1 * v_lo(1) } } };
  return r;
}

LinePencil pencil_xz(const QuadPoly& f)
{
  if (f.a == 0 && f.c == 0)
    fail(ErrorCode::AllZeroAxis, "a = c = 0; use the switched pencil");
  return { f.a, f.c, f.b, f.d, f.g, f.h, f.j };
}

LinePencil pencil_xy_switched(const QuadPoly& f)
{
  return { f.b, 0, 0, f.d, f.e, f.h, f.i };
}

LinearFormJ linear_form_J(const QuadPoly& f)
{
  if (f.a == 0 && f.c == 0)
    fail(ErrorCode::AllZeroAxis, "a = c = 0; use the switched pencil");
  return { f.a * f.b - 2 * f.c * f.d, 2 * f.a * f.g - f.c * f.b,
           f.a * f.j - f.c * f.h };
}

LinearFormJ linear_form_J(const LinePencil& L)
{
  return { L.mp * L.kpq - 2 * L.mq * L.kpp, 2 * L.mp * L.kqq - L.mq * L.kpq,
           L.mp * L.kq - L.mq * L.kp };
}

} // namespace quadlab
