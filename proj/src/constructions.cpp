#include "quadlab/constructions.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

#include "quadlab/energy.hpp"
#include "quadlab/error.hpp"
#include "quadlab/fit.hpp"

namespace quadlab {

namespace {

using CellMass = std::map<std::int64_t, double>;

// Lebesgue measure of [lo, hi] split over the cells [m delta, (m+1) delta).
void add_interval(CellMass& cells, double lo, double hi, double delta)
{
  const auto first = static_cast<std::int64_t>(std::floor(lo / delta));
  const auto last = static_cast<std::int64_t>(std::floor(hi / delta));
  for (std::int64_t m = first; m <= last; ++m) {
    const double a = std::max(lo, static_cast<double>(m) * delta);
    const double b = std::min(hi, static_cast<double>(m + 1) * delta);
    if (b > a) cells[m] += b - a;
  }
}

std::vector<Atom> to_atoms(const CellMass& cells, double scale)
{
  std::vector<Atom> atoms;
  for (const auto& [m, w] : cells) atoms.push_back({ m, w * scale });
  return atoms;
}

double cell_total(const CellMass& cells)
{
  double s = 0;
  for (const auto& [m, w] : cells) s += w;
  return s;
}

void require_dyadic(double delta)
{
  if (!(delta > 0 && delta < 1) || !is_power_of_two(delta))
    fail(ErrorCode::InvalidArgument, "delta must be a power of two below 1");
}

} // namespace

std::string to_string(ConstructionKind k)
{
  switch (k) {
  case ConstructionKind::FrostmanNecessity: return "frostman-necessity";
  case ConstructionKind::UnboundedSupport: return "unbounded-support";
  case ConstructionKind::DivergentEnergy: return "divergent-energy";
  }
  return "unknown";
}

ConstructionKind construction_kind_from_string(const std::string& s)
{
  for (auto k : { ConstructionKind::FrostmanNecessity, ConstructionKind::UnboundedSupport,
                  ConstructionKind::DivergentEnergy })
    if (to_string(k) == s) return k;
  fail(ErrorCode::ParseError, "unknown construction kind '" + s + "'");
}

Admissibility frostman_necessity_admissibility(double alpha, double delta, double c1, double eta)
{
  Admissibility a;
  a.lhs = 8 * c1 * std::pow(delta, 1.5 - alpha) + 4 * delta * delta;
  a.rhs = eta / 16 * delta;
  a.admissible = a.lhs <= a.rhs;
  return a;
}

DiscreteMeasure build_frostman_necessity(double alpha, double delta, double c, double p_S,
                                         double p_A)
{
  if (!(alpha > 0 && alpha < 0.5))
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1/2)");
  if (!(c > 0 && c < 0.25))
    fail(ErrorCode::InvalidArgument, "c must lie in (0, 1/4)");
  if (!(p_S >= 0 && p_A >= 0) || std::abs(p_S + p_A - 1) > 1e-12)
    fail(ErrorCode::InvalidArgument, "p_S + p_A must equal 1");
  require_dyadic(delta);

  const double step = std::sqrt(delta);
  const auto n_max = static_cast<std::int64_t>(std::floor(std::pow(delta, -alpha) + 1e-9));
  CellMass A;
  for (std::int64_t n = 0; n <= n_max; ++n) {
    const double u = static_cast<double>(n) * step;
    const double lo = std::max(0.0, u - delta / 2), hi = std::min(1.0, u + delta / 2);
    if (hi > lo) add_interval(A, lo, hi, delta);
  }
  CellMass all;
  // S = [0, c delta] sits inside cell 0
  if (p_S > 0) all[0] += p_S;
  if (p_A > 0) {
    const double scale = p_A / cell_total(A);
    for (const auto& [m, w] : A) all[m] += w * scale;
  }
  return DiscreteMeasure::normalized(delta, 0, to_atoms(all, 1));
}

DiscreteMeasure build_unbounded_support(double delta)
{
  require_dyadic(delta);
  const int e = -std::ilogb(delta);
  if (e % 2 != 0)
    fail(ErrorCode::InvalidArgument, "delta must be an even power of two");
  const double step = std::ldexp(1.0, -e / 2);
  const std::int64_t count = std::int64_t{ 1 } << (e / 2); // delta^{-1/2}

  CellMass cells;
  for (std::int64_t n = 0; n <= count; ++n) {
    const double u = static_cast<double>(n) * step;
    add_interval(cells, u - delta / 2, u + delta / 2, delta);
  }
  for (std::int64_t k = 1; k <= count; ++k) {
    const double v = 1 / (static_cast<double>(k) * delta);
    add_interval(cells, v - delta / 2, v + delta / 2, delta);
    add_interval(cells, -v - delta / 2, -v + delta / 2, delta);
  }
  return DiscreteMeasure::normalized(delta, 0, to_atoms(cells, 1 / cell_total(cells)));
}

HalfIntervalFamily half_interval_family(const DiscreteMeasure& mu, double delta)
{
  HalfIntervalFamily J;
  J.length = delta / 2;
  const auto x = mu.positions();
  const auto w = mu.weights();
  std::size_t k = 0;
  while (k < x.size()) {
    const double start = x[k];
    double m = 0;
    while (k < x.size() && x[k] <= start + J.length) m += w[k++];
    J.starts.push_back(start);
    J.masses.push_back(m);
  }
  return J;
}

QuadPoly construction_poly(ConstructionKind k)
{
  switch (k) {
  case ConstructionKind::FrostmanNecessity: return preset("x+(y+z)^2");
  case ConstructionKind::UnboundedSupport: return preset("x+yz");
  case ConstructionKind::DivergentEnergy: return preset("x+(y-z)^2");
  }
  fail(ErrorCode::InvalidArgument, "unknown construction kind");
}

double claimed_exponent(ConstructionKind k, double alpha)
{
  switch (k) {
  case ConstructionKind::FrostmanNecessity: return alpha - 1;
  case ConstructionKind::UnboundedSupport: return -0.5;
  case ConstructionKind::DivergentEnergy: return 2 * alpha - 1;
  }
  fail(ErrorCode::InvalidArgument, "unknown construction kind");
}

DiscreteMeasure build_construction(const ConstructionSpec& spec, double delta)
{
  switch (spec.kind) {
  case ConstructionKind::FrostmanNecessity: {
    const SmoothingKernel& K = SmoothingKernel::bump();
    if (spec.strict) {
      const auto adm = frostman_necessity_admissibility(spec.alpha, delta, spec.c1, K.eta());
      if (!adm.admissible)
        fail(ErrorCode::DeltaTooLarge,
             "8 c1 delta^{3/2 - alpha} + 4 delta^2 = " + std::to_string(adm.lhs) +
                 " exceeds (eta/16) delta = " + std::to_string(adm.rhs));
    }
    return build_frostman_necessity(spec.alpha, delta, spec.c.value_or(K.construction_c()),
                                    spec.p_S, spec.p_A);
  }
  case ConstructionKind::UnboundedSupport: return build_unbounded_support(delta);
  case ConstructionKind::DivergentEnergy: return build_cantor(spec.alpha, spec.cantor_depth);
  }
  fail(ErrorCode::InvalidArgument, "unknown construction kind");
}

ScanReport verify_lower_bound(const ConstructionSpec& spec, const std::vector<double>& ladder,
                              const QuadPoly& f, const SmoothingKernel& kernel, bool timing)
{
  if (ladder.size() < 4)
    fail(ErrorCode::InsufficientData, "a lower-bound probe needs at least 4 deltas");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    require_dyadic(ladder[k]);
    if (k > 0 && !(ladder[k] < ladder[k - 1]))
      fail(ErrorCode::InvalidArgument, "the delta ladder must strictly decrease");
  }

  ScanReport rep;
  rep.probe = to_string(spec.kind);
  rep.claimed_exponent = claimed_exponent(spec.kind, spec.alpha);

  std::optional<DiscreteMeasure> fixed;
  if (spec.kind == ConstructionKind::DivergentEnergy) {
    fixed = build_cantor(spec.alpha, spec.cantor_depth);
    if (fixed->delta() > ladder.back())
      fail(ErrorCode::InvalidArgument, "Cantor pitch is coarser than the smallest delta");
  }

  std::vector<std::pair<double, double>> pts;
  for (double delta : ladder) {
    const auto t0 = std::chrono::steady_clock::now();
    const DiscreteMeasure mu = fixed ? *fixed : build_construction(spec, delta);
    const BinnedDistribution nu = pushforward(f, mu, delta);
    ScanRow row;
    row.delta = delta;
    row.energy = smoothed_energy(nu, delta, kernel);
    row.slice_sup = slice_mass_sup(nu);
    row.diagnostics["atoms"] = static_cast<double>(mu.size());
    row.diagnostics["ratio"] = row.energy / std::pow(delta, rep.claimed_exponent);

    switch (spec.kind) {
    case ConstructionKind::FrostmanNecessity: {
      const auto adm = frostman_necessity_admissibility(spec.alpha, delta, spec.c1, kernel.eta());
      row.diagnostics["admissible"] = adm.admissible ? 1 : 0;
      row.diagnostics["admissibility_lhs"] = adm.lhs;
      row.diagnostics["admissibility_rhs"] = adm.rhs;
      row.diagnostics["frostman_alpha"] = frostman_constant(mu, spec.alpha);
      break;
    }
    case ConstructionKind::UnboundedSupport:
      row.diagnostics["frostman_half"] = frostman_constant(mu, 0.5);
      row.diagnostics["support_max"] = mu.position(mu.size() - 1);
      break;
    case ConstructionKind::DivergentEnergy: {
      const HalfIntervalFamily J = half_interval_family(mu, delta);
      const auto [lo, hi] = std::minmax_element(J.masses.begin(), J.masses.end());
      const double scale = std::pow(delta, spec.alpha);
      row.diagnostics["j_count"] = static_cast<double>(J.size());
      row.diagnostics["j_count_scaled"] = static_cast<double>(J.size()) * scale;
      row.diagnostics["j_mass_min_scaled"] = *lo / scale;
      row.diagnostics["j_mass_max_scaled"] = *hi / scale;
      break;
    }
    }
    if (timing)
      row.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    pts.emplace_back(delta, row.energy);
    rep.rows.push_back(std::move(row));
  }

  rep.fit = fit_exponent(pts);
  const double first_ratio = rep.rows.front().diagnostics["ratio"];
  bool ratios_ok = true;
  for (auto& r : rep.rows) ratios_ok = ratios_ok && r.diagnostics["ratio"] >= 0.25 * first_ratio;
  const bool slope_ok = rep.fit.slope <= rep.claimed_exponent + rep.tol_fit;
  rep.verdict = slope_ok && ratios_ok ? Verdict::Pass : Verdict::Fail;
  if (!slope_ok) rep.notes.push_back("fitted slope exceeds claimed exponent + tol_fit");
  if (!ratios_ok) rep.notes.push_back("energy / delta^claimed drops below a quarter of its first value");
  return rep;
}

} // namespace quadlab
