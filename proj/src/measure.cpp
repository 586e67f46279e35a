#include "quadlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "quadlab/error.hpp"
#include "quadlab/parallel.hpp"

namespace quadlab {

bool is_power_of_two(double x)
{
  if (!(x > 0) || !std::isfinite(x)) return false;
  int e = 0;
  return std::frexp(x, &e) == 0.5;
}

DiscreteMeasure::DiscreteMeasure(double delta, double origin, std::vector<Atom> atoms)
  : delta_(delta), origin_(origin), atoms_(std::move(atoms))
{
  if (!is_power_of_two(delta))
    fail(ErrorCode::InvalidArgument, "delta must be a power of two");
  if (!std::isfinite(origin))
    fail(ErrorCode::InvalidArgument, "origin must be finite");
  if (atoms_.empty())
    fail(ErrorCode::InvalidArgument, "measure has no atoms");
  double sum = 0;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    if (!(atoms_[k].weight >= 0) || !std::isfinite(atoms_[k].weight))
      fail(ErrorCode::InvalidArgument, "atom weight must be finite and >= 0");
    if (k > 0 && atoms_[k].index <= atoms_[k - 1].index)
      fail(ErrorCode::InvalidArgument, "atom indices must be strictly increasing");
    sum += atoms_[k].weight;
  }
  if (std::abs(sum - 1) > 1e-12)
    fail(ErrorCode::InvalidArgument, "weights sum to " + std::to_string(sum) + ", not 1");
}

DiscreteMeasure DiscreteMeasure::normalized(double delta, double origin, std::vector<Atom> atoms)
{
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& l, const Atom& r) { return l.index < r.index; });
  std::vector<Atom> merged;
  for (const Atom& a : atoms) {
    if (!merged.empty() && merged.back().index == a.index)
      merged.back().weight += a.weight;
    else
      merged.push_back(a);
  }
  std::erase_if(merged, [](const Atom& a) { return a.weight == 0; });
  double sum = 0;
  for (const Atom& a : merged) sum += a.weight;
  if (!(sum > 0))
    fail(ErrorCode::InvalidArgument, "measure has no positive mass");
  for (Atom& a : merged) a.weight /= sum;
  return DiscreteMeasure(delta, origin, std::move(merged));
}

std::vector<double> DiscreteMeasure::positions() const
{
  std::vector<double> out(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) out[k] = position(k);
  return out;
}

std::vector<std::int64_t> DiscreteMeasure::indices() const
{
  std::vector<std::int64_t> out(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) out[k] = atoms_[k].index;
  return out;
}

std::vector<double> DiscreteMeasure::weights() const
{
  std::vector<double> out(atoms_.size());
  for (std::size_t k = 0; k < atoms_.size(); ++k) out[k] = atoms_[k].weight;
  return out;
}

double DiscreteMeasure::diameter() const
{
  return static_cast<double>(atoms_.back().index - atoms_.front().index) * delta_;
}

double DiscreteMeasure::total_mass() const
{
  double s = 0;
  for (const Atom& a : atoms_) s += a.weight;
  return s;
}

DiscreteMeasure build_cantor(double alpha, int depth)
{
  if (!(alpha > 0 && alpha <= 1))
    fail(ErrorCode::InvalidArgument, "alpha must lie in (0, 1]");
  if (depth < 0)
    fail(ErrorCode::InvalidArgument, "depth must be >= 0");
  if (depth > 24)
    fail(ErrorCode::DepthTooLarge, "2^depth atoms exceeds 2^24");

  const double r = std::exp2(-1.0 / alpha);
  // exponent of the pitch; tiny slack keeps exact ratios such as 6/0.5 exact
  const double e = std::ceil(depth / alpha - 1e-9);
  if (e > 1000)
    fail(ErrorCode::DepthTooLarge, "grid pitch underflows");
  const double delta = std::exp2(-e);

  const std::size_t n = std::size_t{ 1 } << depth;
  std::vector<double> step(depth);
  for (int k = 0; k < depth; ++k) step[k] = (1 - r) * std::pow(r, k);

  std::vector<Atom> atoms(n);
  for (std::size_t code = 0; code < n; ++code) {
    double x = 0;
    for (int k = 0; k < depth; ++k)
      if (code >> (depth - 1 - k) & 1) x += step[k];
    atoms[code].index = static_cast<std::int64_t>(std::floor(x / delta + 1e-9));
    atoms[code].weight = std::ldexp(1.0, -depth);
  }
  return DiscreteMeasure(delta, 0, std::move(atoms));
}

namespace {

// Scans closed windows [i - c, i + c] (grid units) around every atom, with
// c = 1, 2, 4, ... until c >= span. fn(mass, c) returns the score to maximize.
template <typename Score>
double window_scan(const DiscreteMeasure& mu, Score fn)
{
  const auto& atoms = mu.atoms();
  const std::size_t n = atoms.size();
  std::vector<double> prefix(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + atoms[k].weight;
  const std::int64_t span = atoms.back().index - atoms.front().index;

  auto less_idx = [](const Atom& a, std::int64_t v) { return a.index < v; };
  auto idx_less = [](std::int64_t v, const Atom& a) { return v < a.index; };

  const std::size_t chunk = 4096;
  const std::size_t blocks = (n + chunk - 1) / chunk;
  std::vector<double> best(blocks, 0);
  parallel_for(blocks, [&](std::size_t b) {
    double m = 0;
    for (std::size_t k = b * chunk; k < std::min(n, (b + 1) * chunk); ++k) {
      const std::int64_t s = atoms[k].index;
      for (std::int64_t c = 1;; c *= 2) {
        const auto lo = std::lower_bound(atoms.begin(), atoms.end(), s - c, less_idx);
        const auto hi = std::upper_bound(atoms.begin(), atoms.end(), s + c, idx_less);
        const double mass = prefix[hi - atoms.begin()] - prefix[lo - atoms.begin()];
        m = std::max(m, fn(mass, c));
        if (c >= span) break;
      }
    }
    best[b] = m;
  });
  return *std::max_element(best.begin(), best.end());
}

} // namespace

double frostman_constant(const DiscreteMeasure& mu, double alpha)
{
  const double delta = mu.delta();
  return window_scan(mu, [&](double mass, std::int64_t c) {
    return mass / std::pow(2.0 * c * delta, alpha);
  });
}

AdRegularity ad_regular_check(const DiscreteMeasure& mu, double alpha)
{
  const double delta = mu.delta();
  AdRegularity out;
  out.upper_const = frostman_constant(mu, alpha);
  out.lower_const = window_scan(mu, [&](double mass, std::int64_t c) {
    return mass > 0 ? std::pow(2.0 * c * delta, alpha) / mass : INFINITY;
  });
  return out;
}

LevelDecomposition dyadic_levels(const DiscreteMeasure& mu, double alpha, double c_mu)
{
  LevelDecomposition dec;
  dec.c_mu = c_mu;
  dec.delta = mu.delta();
  dec.alpha = alpha;
  const double base = std::pow(mu.delta(), alpha);
  for (const Atom& a : mu.atoms()) {
    if (a.weight == 0) continue;
    int k = 0;
    while (!(a.weight > std::ldexp(base, -(k + 1)))) ++k;
    if (a.weight > c_mu * std::ldexp(base, -k)) {
      std::ostringstream os;
      os << "atom " << a.index << " has weight " << a.weight << " > c_mu 2^-" << k
         << " delta^alpha = " << c_mu * std::ldexp(base, -k);
      fail(ErrorCode::UnassignedAtom, os.str());
    }
    dec.levels[k].push_back(a.index);
    dec.level_mass[k] += a.weight;
  }
  return dec;
}

namespace {

// count of elements in [s, s + cells) for every anchor s in M and dyadic cells
template <typename Visit>
void anchored_windows(const IndexSet& M, Visit visit)
{
  if (M.empty()) return;
  const std::int64_t span = M.back() - M.front() + 1;
  for (std::size_t k = 0; k < M.size(); ++k) {
    for (std::int64_t c = 1;; c *= 2) {
      const auto hi = std::lower_bound(M.begin() + k, M.end(), M[k] + c);
      visit(IndexWindow{ M[k], c, static_cast<std::int64_t>(hi - (M.begin() + k)) });
      if (c >= span) break;
    }
  }
}

} // namespace

NonConcentration nonconcentration_check(const IndexSet& M, double alpha, double K)
{
  NonConcentration out;
  anchored_windows(M, [&](const IndexWindow& w) {
    const double scale = std::pow(static_cast<double>(w.cells), alpha);
    const double ratio = w.count / scale;
    if (out.pass && w.count > K * scale) {
      out.pass = false;
      out.witness = w;
    }
    if (ratio > out.worst_ratio) {
      out.worst_ratio = ratio;
      if (out.pass) out.witness = w;
    }
  });
  return out;
}

double nonconcentration_constant(const IndexSet& M, double alpha)
{
  return nonconcentration_check(M, alpha, INFINITY).worst_ratio;
}

SeparatedClassPartition partition_nonconcentrated(const IndexSet& M, double alpha, double K)
{
  if (!std::is_sorted(M.begin(), M.end()) ||
      std::adjacent_find(M.begin(), M.end()) != M.end())
    fail(ErrorCode::InvalidArgument, "M must be sorted without repeats");
  const NonConcentration nc = nonconcentration_check(M, alpha, K);
  if (!nc.pass) {
    std::ostringstream os;
    os << "window [" << nc.witness.start << ", " << nc.witness.start + nc.witness.cells
       << ") holds " << nc.witness.count << " > K |J|^alpha delta^-alpha = "
       << K * std::pow(static_cast<double>(nc.witness.cells), alpha);
    fail(ErrorCode::PreconditionFail, os.str());
  }
  SeparatedClassPartition out;
  out.L = static_cast<int>(std::ceil(2 * K)) + 1;
  out.classes.resize(out.L);
  // class l (1-based) holds positions j with j = l mod L
  for (std::size_t j = 1; j <= M.size(); ++j) {
    const std::size_t l = j % out.L == 0 ? out.L : j % out.L;
    out.classes[l - 1].push_back(M[j - 1]);
  }
  return out;
}

std::vector<LevelClassCount> level_class_counts(const LevelDecomposition& dec)
{
  std::vector<LevelClassCount> out;
  for (const auto& [k, M] : dec.levels) {
    LevelClassCount c;
    c.k = k;
    c.size = M.size();
    c.K = nonconcentration_constant(M, dec.alpha);
    c.L = static_cast<int>(std::ceil(2 * c.K)) + 1;
    out.push_back(c);
  }
  return out;
}

} // namespace quadlab
