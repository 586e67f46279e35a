#include "quadlab/incidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "quadlab/error.hpp"
#include "quadlab/parallel.hpp"

namespace quadlab {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

// -s x + c y - a = 0; brute force and grid share this exact predicate
struct LineEq
{
  double s, c, a;

  explicit LineEq(const PlanarLine& l) : s(std::sin(l.theta)), c(std::cos(l.theta)), a(l.a) {}
  double distance(double x, double y) const { return std::abs(-s * x + c * y - a); }
};

} // namespace

PlanarLine PlanarLine::canonical(double theta, double a)
{
  if (!std::isfinite(theta) || !std::isfinite(a))
    fail(ErrorCode::InvalidArgument, "line parameters must be finite");
  if (a < 0) {
    a = -a;
    theta += std::numbers::pi;
  }
  theta = std::fmod(theta, two_pi);
  if (theta < 0) theta += two_pi;
  if (theta >= two_pi) theta -= two_pi;
  if (a == 0 && theta >= std::numbers::pi) theta -= std::numbers::pi;
  return { theta, a };
}

PlanarLine PlanarLine::from_slope_intercept(double m, double k)
{
  const double s = std::sqrt(1 + m * m);
  return canonical(std::atan2(1.0, m), -k / s);
}

double PlanarLine::distance(const Point2& p) const
{
  return LineEq(*this).distance(p.x, p.y);
}

double PlanarLine::x_at(double y) const
{
  const double s = std::sin(theta), c = std::cos(theta);
  const double t = (y - a * c) / s;
  return t * c - a * s;
}

double line_metric(const PlanarLine& l1, const PlanarLine& l2)
{
  const double s1 = std::sin(l1.theta), c1 = std::cos(l1.theta);
  const double s2 = std::sin(l2.theta), c2 = std::cos(l2.theta);
  const double turn = std::hypot(c1 - c2, s1 - s2);
  const double shift = std::hypot(-l1.a * s1 + l2.a * s2, l1.a * c1 - l2.a * c2);
  return turn + shift;
}

std::int64_t PointSet2D::total() const
{
  std::int64_t t = 0;
  for (auto m : multiplicity) t += m;
  return t;
}

std::int64_t PointSet2D::max_multiplicity() const
{
  std::int64_t m = 0;
  for (auto v : multiplicity) m = std::max(m, v);
  return m;
}

void LineFamily::add(const PlanarLine& l, std::int64_t mult)
{
  lines.push_back(l);
  multiplicity.push_back(mult);
}

PencilLine line_from_pencil(const LinePencil& pencil, double p, double q)
{
  PencilLine out;
  out.slope = pencil.slope(p, q);
  out.intercept = pencil.intercept(p, q);
  out.line = PlanarLine::from_slope_intercept(out.slope, out.intercept);
  return out;
}

PencilLine line_from_pair(const QuadPoly& f, double x, double z)
{
  return line_from_pencil(pencil_xz(f), x, z);
}

PencilLine line_from_pair_switched(const QuadPoly& f, double x, double y)
{
  return line_from_pencil(pencil_xy_switched(f), x, y);
}

LineFamily pencil_family(const LinePencil& pencil, const std::vector<double>& M)
{
  LineFamily L;
  for (double p : M)
    for (double q : M) {
      L.add(line_from_pencil(pencil, p, q).line);
      L.provenance.emplace_back(p, q);
    }
  return L;
}

PointSet2D phi_point_set(const Planar2Fn& F, const std::vector<double>& M)
{
  PointSet2D P;
  std::vector<double> xs(M.size());
  for (double y : M) {
    for (std::size_t k = 0; k < M.size(); ++k) xs[k] = F(M[k], y);
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (!P.points.empty() && P.points.back().y == y &&
          std::abs(xs[k] - P.points.back().x) <= 1e-15 * (1 + std::abs(xs[k]))) {
        ++P.multiplicity.back();
        continue;
      }
      P.points.push_back({ xs[k], y });
      P.multiplicity.push_back(1);
    }
  }
  return P;
}

Distortion bilipschitz_distortion(const Planar2Fn& F, const std::vector<double>& M,
                                  std::uint64_t seed)
{
  std::vector<Point2> src, img;
  for (double x : M)
    for (double y : M) {
      src.push_back({ x, y });
      img.push_back({ F(x, y), y });
    }
  const std::size_t n = src.size();
  Distortion d;
  d.lower = std::numeric_limits<double>::infinity();
  d.upper = 0;
  auto visit = [&](std::size_t i, std::size_t j, double& lo, double& hi) {
    const double base = std::hypot(src[i].x - src[j].x, src[i].y - src[j].y);
    if (base == 0) return;
    const double r = std::hypot(img[i].x - img[j].x, img[i].y - img[j].y) / base;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  };
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n > 0 ? n - 1 : 0);
  if (pairs <= 1e8) {
    std::vector<double> lo(n, d.lower), hi(n, 0);
    parallel_for(n, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n; ++j) visit(i, j, lo[i], hi[i]);
    });
    for (std::size_t i = 0; i < n; ++i) {
      d.lower = std::min(d.lower, lo[i]);
      d.upper = std::max(d.upper, hi[i]);
    }
    d.pairs = static_cast<std::uint64_t>(pairs);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < 1000000; ++s) {
      const std::size_t i = pick(rng), j = pick(rng);
      if (i != j) visit(i, j, d.lower, d.upper);
    }
    d.sampled = true;
    d.pairs = 1000000;
  }
  if (d.lower == std::numeric_limits<double>::infinity()) d.lower = 0;
  return d;
}

std::int64_t count_incidences_brute(const PointSet2D& P, const LineFamily& L, double delta)
{
  std::vector<std::int64_t> per(L.size(), 0);
  parallel_for(L.size(), [&](std::size_t l) {
    const LineEq eq(L.lines[l]);
    std::int64_t c = 0;
    for (std::size_t p = 0; p < P.size(); ++p)
      if (eq.distance(P.points[p].x, P.points[p].y) <= delta) c += P.multiplicity[p];
    per[l] = c * L.multiplicity[l];
  });
  std::int64_t total = 0;
  for (auto c : per) total += c;
  return total;
}

namespace {

// Points sorted by (major cell, minor cell) with the list of occupied major
// cells. For the column index the major axis is x.
struct CellIndex
{
  struct Entry
  {
    std::int64_t major, minor;
    std::uint32_t point;
  };
  std::vector<Entry> entries;
  std::vector<std::size_t> starts; // first entry of every occupied major cell

  CellIndex(const PointSet2D& P, double delta, bool by_x)
  {
    for (std::size_t k = 0; k < P.size(); ++k) {
      const auto ix = static_cast<std::int64_t>(std::floor(P.points[k].x / delta));
      const auto iy = static_cast<std::int64_t>(std::floor(P.points[k].y / delta));
      entries.push_back({ by_x ? ix : iy, by_x ? iy : ix, static_cast<std::uint32_t>(k) });
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& l, const Entry& r) {
      return l.major != r.major ? l.major < r.major : l.minor < r.minor;
    });
    for (std::size_t k = 0; k < entries.size(); ++k)
      if (k == 0 || entries[k].major != entries[k - 1].major) starts.push_back(k);
    starts.push_back(entries.size());
  }
};

} // namespace

std::int64_t count_incidences(const PointSet2D& P, const LineFamily& L, double delta)
{
  if (!(delta > 0))
    fail(ErrorCode::InvalidArgument, "delta must be positive");
  if (P.size() == 0 || L.size() == 0) return 0;
  for (const Point2& p : P.points)
    if (!(std::abs(p.x / delta) < 4e18 && std::abs(p.y / delta) < 4e18))
      return count_incidences_brute(P, L, delta);

  const CellIndex cols(P, delta, true), rows(P, delta, false);
  std::vector<std::int64_t> per(L.size(), 0);
  parallel_for(L.size(), [&](std::size_t l) {
    const LineEq eq(L.lines[l]);
    // walk along the axis the line is closest to
    const bool shallow = std::abs(eq.c) >= std::abs(eq.s);
    const CellIndex& idx = shallow ? cols : rows;
    const double lead = shallow ? eq.c : eq.s;
    const double reach = delta / std::abs(lead);
    std::int64_t c = 0;
    for (std::size_t g = 0; g + 1 < idx.starts.size(); ++g) {
      const std::size_t b = idx.starts[g], e = idx.starts[g + 1];
      const double lo = static_cast<double>(idx.entries[b].major) * delta;
      const double hi = lo + delta;
      // the other coordinate along the line at both ends of the strip
      double v0, v1;
      if (shallow) {
        v0 = (eq.a + eq.s * lo) / eq.c;
        v1 = (eq.a + eq.s * hi) / eq.c;
      } else {
        v0 = (eq.c * lo - eq.a) / eq.s;
        v1 = (eq.c * hi - eq.a) / eq.s;
      }
      const double vmin = std::min(v0, v1) - reach, vmax = std::max(v0, v1) + reach;
      const auto m0 = static_cast<std::int64_t>(std::floor(vmin / delta)) - 1;
      const auto m1 = static_cast<std::int64_t>(std::floor(vmax / delta)) + 1;
      auto it = std::lower_bound(idx.entries.begin() + b, idx.entries.begin() + e, m0,
                                 [](const CellIndex::Entry& x, std::int64_t v) { return x.minor < v; });
      for (; it != idx.entries.begin() + e && it->minor <= m1; ++it) {
        const Point2& p = P.points[it->point];
        if (eq.distance(p.x, p.y) <= delta) c += P.multiplicity[it->point];
      }
    }
    per[l] = c * L.multiplicity[l];
  });
  std::int64_t total = 0;
  for (auto c : per) total += c;
  return total;
}

std::vector<LineFamily> separate_lines(const LineFamily& L, double rho)
{
  std::vector<LineFamily> classes;
  const bool prov = L.provenance.size() == L.size();
  for (std::size_t k = 0; k < L.size(); ++k)
    for (std::int64_t copy = 0; copy < L.multiplicity[k]; ++copy) {
      LineFamily* home = nullptr;
      for (LineFamily& cls : classes) {
        bool ok = true;
        for (const PlanarLine& other : cls.lines)
          if (line_metric(L.lines[k], other) < rho) {
            ok = false;
            break;
          }
        if (ok) {
          home = &cls;
          break;
        }
      }
      if (!home) home = &classes.emplace_back();
      home->add(L.lines[k]);
      if (prov) home->provenance.push_back(L.provenance[k]);
    }
  return classes;
}

OmegaSplit tube_split_omega(const LinePencil& pencil, const std::vector<double>& M, double gamma,
                            double delta, double alpha)
{
  OmegaSplit out;
  out.J = linear_form_J(pencil);
  out.threshold = std::pow(delta, gamma);
  const double n = static_cast<double>(M.size());
  out.budget = std::pow(delta, gamma * alpha) * n * n;
  out.slabs_nominal = static_cast<std::size_t>(std::ceil(2 / out.threshold));
  const double norm = std::hypot(out.J.A, out.J.B);
  std::vector<std::int64_t> slabs;
  for (double p : M)
    for (double q : M) {
      if (std::abs(out.J(p, q)) <= out.threshold) {
        out.omega_prime.emplace_back(p, q);
        continue;
      }
      out.omega_doubleprime.emplace_back(p, q);
      if (pencil.slope(p, q) == 0) ++out.vertical_lines;
      const double s = norm > 0 ? (out.J.A * p + out.J.B * q) / norm : 0;
      slabs.push_back(static_cast<std::int64_t>(std::floor(s / out.threshold)));
    }
  std::sort(slabs.begin(), slabs.end());
  out.slabs_occupied = std::unique(slabs.begin(), slabs.end()) - slabs.begin();
  return out;
}

OmegaSplit tube_split_omega(const QuadPoly& f, const std::vector<double>& M, double gamma,
                            double delta, double alpha)
{
  return tube_split_omega(pencil_xz(f), M, gamma, delta, alpha);
}

std::uint64_t sum_energy_count(const std::vector<double>& A, const std::vector<double>& B,
                               const std::vector<double>& C, double delta)
{
  if (static_cast<double>(A.size()) * static_cast<double>(B.size()) > 1e7)
    fail(ErrorCode::BudgetExceeded, "|A||B| exceeds 1e7");
  std::vector<std::uint64_t> per(C.size(), 0);
  parallel_for(C.size(), [&](std::size_t t) {
    const double c = C[t];
    std::vector<double> v;
    v.reserve(A.size() * B.size());
    for (double a : A)
      for (double b : B) v.push_back(a + c * b);
    std::sort(v.begin(), v.end());
    std::uint64_t close = 0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (j < i + 1) j = i + 1;
      while (j < v.size() && v[j] - v[i] <= delta) ++j;
      close += j - i - 1;
    }
    per[t] = v.size() + 2 * close;
  });
  std::uint64_t total = 0;
  for (auto c : per) total += c;
  return total;
}

CollinearityWitness collinearity_witness(double u, double v, double z0, double y0, double z1,
                                         double y1, double m, double k, double delta,
                                         double eps_over_alpha)
{
  const double gap = std::abs(y1 - y0);
  if (gap < std::pow(delta, 3 * eps_over_alpha))
    fail(ErrorCode::FiberTooClose, "|y1 - y0| is below delta^{3 eps/alpha}");
  CollinearityWitness w;
  w.incidences_hold = std::abs(u - (m * v + k)) <= delta &&
                      std::abs(z0 - (m * y0 + k)) <= delta &&
                      std::abs(z1 - (m * y1 + k)) <= delta;
  w.lambda = (v - y0) / (y1 - y0);
  w.combination_error = (1 - w.lambda) * z0 + w.lambda * z1 - u;
  w.bound = 2 * (1 + std::abs(v - y0)) * std::pow(delta, 1 - 3 * eps_over_alpha);
  w.pass = !w.incidences_hold || std::abs(w.combination_error) <= w.bound * (1 + 1e-12);
  return w;
}

SeparationConstant separation_constant(const LinePencil& P)
{
  SeparationConstant s;
  s.norm_u = std::hypot(P.mp, P.mq);
  if (!(s.norm_u > 0))
    fail(ErrorCode::AllZeroAxis, "the pencil has no slope part");
  const LinearFormJ J = linear_form_J(P);
  s.norm_AB = std::hypot(J.A, J.B);

  for (double p : { 0.0, 1.0 })
    for (double q : { 0.0, 1.0 }) s.M = std::max(s.M, std::abs(P.slope(p, q)));
  s.K_max = std::abs(P.kpq) + std::abs(P.kpp) + std::abs(P.kqq) + std::abs(P.kp) + std::abs(P.kq);
  // d k / d e1 is affine, so its sup over the square sits at a corner
  for (double p : { -1.0, 2.0 })
    for (double q : { -1.0, 2.0 }) {
      const double kp = P.kpq * q + 2 * P.kpp * p + P.kp;
      const double kq = P.kpq * p + 2 * P.kqq * q + P.kq;
      s.C_f = std::max(s.C_f, std::abs(kp * P.mp + kq * P.mq) / s.norm_u);
    }

  // chord >= A1 |dm|; foot-point gap >= A2 |dk| - A3 |dm|
  const double A1 = 2 / (std::numbers::pi * (1 + s.M * s.M));
  const double A2 = 1 / (1 + s.M * s.M);
  const double A3 = 0.65 * s.K_max;
  const double inf = std::numeric_limits<double>::infinity();
  s.c0 = std::min({ 0.5, s.norm_AB > 0 ? 1 / (2 * s.norm_AB) : inf,
                    s.C_f > 0 ? 1 / (8 * s.C_f * s.norm_u) : inf,
                    A3 > 0 ? A2 / (16 * s.norm_u * s.norm_u * A3) : inf });
  s.c_f = std::min({ A1 * s.norm_u * s.c0, A2 / (16 * s.norm_u), 2 / std::sqrt(1 + s.M * s.M) });
  return s;
}

} // namespace quadlab
