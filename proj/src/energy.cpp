#include "quadlab/energy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "quadlab/error.hpp"
#include "quadlab/parallel.hpp"

namespace quadlab {

namespace {

std::atomic<std::uint64_t> pipeline_calls{ 0 };

using BinList = std::vector<std::pair<std::int64_t, double>>;

void check_budget(const DiscreteMeasure& mu)
{
  const std::uint64_t n = mu.size();
  if (n > 1024 || n * n * n > triple_budget)
    fail(ErrorCode::TripleBudgetExceeded,
         std::to_string(n) + " atoms give more than 2^30 triples");
}

std::int64_t bin_of(double value, double width)
{
  const double q = std::floor(value / width);
  if (!(std::abs(q) < 4.0e18))
    fail(ErrorCode::InvalidArgument, "value out of the representable bin range");
  return static_cast<std::int64_t>(q);
}

void compress(BinList& v)
{
  std::sort(v.begin(), v.end(),
            [](const auto& l, const auto& r) { return l.first < r.first; });
  std::size_t out = 0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (out > 0 && v[out - 1].first == v[k].first)
      v[out - 1].second += v[k].second;
    else
      v[out++] = v[k];
  }
  v.resize(out);
  v.shrink_to_fit();
}

BinList merge(const BinList& a, const BinList& b)
{
  BinList out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, a[i].second + b[j].second);
      ++i;
      ++j;
    }
  }
  return out;
}

// pairwise rounds with a fixed tree shape, so the sum order never depends on
// the worker count
BinList tree_reduce(std::vector<BinList> blocks)
{
  if (blocks.empty()) return {};
  while (blocks.size() > 1) {
    const std::size_t half = (blocks.size() + 1) / 2;
    std::vector<BinList> next(half);
    parallel_for(half, [&](std::size_t k) {
      if (2 * k + 1 < blocks.size()) {
        next[k] = merge(blocks[2 * k], blocks[2 * k + 1]);
        BinList().swap(blocks[2 * k]);
        BinList().swap(blocks[2 * k + 1]);
      } else
        next[k] = std::move(blocks[2 * k]);
    });
    blocks = std::move(next);
  }
  return std::move(blocks[0]);
}

BinnedDistribution to_distribution(BinList list, double width)
{
  BinnedDistribution nu;
  nu.bin_width = width;
  nu.bins.reserve(list.size());
  nu.mass.reserve(list.size());
  for (const auto& [b, m] : list) {
    nu.bins.push_back(b);
    nu.mass.push_back(m);
  }
  return nu;
}

// Enumerates all triples; classify(x, y, z) returns a bit mask of channels
// the triple belongs to. Produces one distribution per channel.
template <typename Classifier>
std::vector<BinnedDistribution> binned_channels(const QuadPoly& f, const DiscreteMeasure& mu,
                                                double width, int channels, Classifier classify)
{
  check_budget(mu);
  if (!(width > 0) || !std::isfinite(width))
    fail(ErrorCode::InvalidArgument, "bin width must be positive");
  ++pipeline_calls;

  const auto x = mu.positions();
  const auto w = mu.weights();
  const std::size_t n = x.size();
  std::vector<std::vector<BinList>> blocks(channels, std::vector<BinList>(n));
  parallel_for(n, [&](std::size_t p) {
    std::vector<BinList> local(channels);
    for (auto& l : local) l.reserve(n * n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r) {
        const Vec3 u{ x[p], x[q], x[r] };
        const std::int64_t b = bin_of(evaluate(f, u), width);
        const double m = w[p] * w[q] * w[r];
        const unsigned mask = classify(u);
        for (int c = 0; c < channels; ++c)
          if (mask >> c & 1u) local[c].emplace_back(b, m);
      }
    for (int c = 0; c < channels; ++c) {
      compress(local[c]);
      blocks[c][p] = std::move(local[c]);
    }
  });
  std::vector<BinnedDistribution> out;
  for (int c = 0; c < channels; ++c)
    out.push_back(to_distribution(tree_reduce(std::move(blocks[c])), width));
  return out;
}

} // namespace

double BinnedDistribution::total() const
{
  double s = 0;
  for (double m : mass) s += m;
  return s;
}

double BinnedDistribution::mass_at(std::int64_t bin) const
{
  const auto it = std::lower_bound(bins.begin(), bins.end(), bin);
  return it != bins.end() && *it == bin ? mass[it - bins.begin()] : 0;
}

std::pair<std::int64_t, std::vector<double>> BinnedDistribution::dense() const
{
  if (bins.empty()) return { 0, {} };
  std::vector<double> out(static_cast<std::size_t>(bins.back() - bins.front() + 1), 0);
  for (std::size_t k = 0; k < bins.size(); ++k) out[bins[k] - bins.front()] = mass[k];
  return { bins.front(), std::move(out) };
}

std::uint64_t energy_pipeline_calls()
{
  return pipeline_calls.load();
}

BinnedDistribution pushforward(const QuadPoly& f, const DiscreteMeasure& mu,
                               std::optional<double> bin_width)
{
  auto ch = binned_channels(f, mu, bin_width.value_or(mu.delta()), 1,
                            [](const Vec3&) { return 1u; });
  return std::move(ch[0]);
}

double smoothed_energy(const BinnedDistribution& nu, double delta, const SmoothingKernel& kernel)
{
  if (delta != nu.bin_width)
    fail(ErrorCode::InvalidArgument, "delta must equal the bin width");
  const double w = nu.bin_width;
  const auto reach = static_cast<std::int64_t>(std::ceil(kernel.support_radius() * delta / w));
  double e = 0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    while (nu.bins[lo] < nu.bins[i] - reach) ++lo;
    double row = 0;
    for (std::size_t j = lo; j < nu.size() && nu.bins[j] <= nu.bins[i] + reach; ++j)
      row += nu.mass[j] * kernel.autocorrelation(static_cast<double>(nu.bins[j] - nu.bins[i]) * w / delta);
    e += nu.mass[i] * row;
  }
  return e / delta;
}

double window_pair_sum(const BinnedDistribution& a, const BinnedDistribution& b)
{
  double s = 0;
  std::size_t lo = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    while (lo < b.size() && b.bins[lo] < a.bins[i] - 2) ++lo;
    double near = 0;
    for (std::size_t j = lo; j < b.size() && b.bins[j] <= a.bins[i] + 2; ++j) near += b.mass[j];
    s += a.mass[i] * near;
  }
  return s;
}

double coincidence_integral(const QuadPoly& f, const DiscreteMeasure& mu, double delta)
{
  const BinnedDistribution nu = pushforward(f, mu, delta);
  return window_pair_sum(nu, nu);
}

double CoincidenceSplit::sum() const
{
  double s = 0;
  for (double v : I) s += v;
  return s;
}

CoincidenceSplit coincidence_split(const QuadPoly& f, const DiscreteMeasure& mu, double delta,
                                   double kappa)
{
  if (!(kappa > 0))
    fail(ErrorCode::InvalidArgument, "kappa must be positive");
  const double r = std::pow(delta, kappa);
  const double r_comp = r / std::sqrt(3.0);
  // channels: 0 all, 1 small gradient, 2..4 large x, y, z component
  const auto ch = binned_channels(f, mu, delta, 5, [&](const Vec3& u) {
    const Vec3 g = gradient(f, u);
    unsigned mask = 1u;
    if (std::sqrt(g[0] * g[0] + g[1] * g[1] + g[2] * g[2]) <= r) mask |= 2u;
    if (std::abs(g[0]) > r_comp) mask |= 4u;
    if (std::abs(g[1]) > r_comp) mask |= 8u;
    if (std::abs(g[2]) > r_comp) mask |= 16u;
    return mask;
  });
  CoincidenceSplit s;
  s.kappa = kappa;
  s.total = window_pair_sum(ch[0], ch[0]);
  s.I[0] = window_pair_sum(ch[1], ch[1]);
  for (int c = 0; c < 3; ++c) {
    s.I[1 + c] = window_pair_sum(ch[0], ch[2 + c]);
    s.I[4 + c] = window_pair_sum(ch[2 + c], ch[0]);
  }
  return s;
}

double tube_mass(const DiscreteMeasure& mu, const TubeGeometry& geom, double r)
{
  check_budget(mu);
  if (!(r >= 0))
    fail(ErrorCode::InvalidArgument, "radius must be >= 0");
  ++pipeline_calls;

  Vec3 d{ 0, 0, 0 };
  const bool line = geom.direction.has_value();
  if (line) {
    d = *geom.direction;
    const double len = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
    if (!(len > 0))
      fail(ErrorCode::InvalidArgument, "line direction must be nonzero");
    for (double& c : d) c /= len;
  }
  const Vec3& p = geom.point;
  const auto x = mu.positions();
  const auto w = mu.weights();
  const std::size_t n = x.size();

  auto dist2 = [&](double u0, double u1, double u2) {
    const double w0 = u0 - p[0], w1 = u1 - p[1], w2 = u2 - p[2];
    const double all = w0 * w0 + w1 * w1 + w2 * w2;
    if (!line) return all;
    const double along = w0 * d[0] + w1 * d[1] + w2 * d[2];
    return all - along * along;
  };
  const double r2 = r * r;
  const double slack = 1e-7 * (1 + r);

  std::vector<double> partial(n, 0);
  parallel_for(n, [&](std::size_t i) {
    double acc = 0;
    for (std::size_t j = 0; j < n; ++j) {
      // dist^2 as a quadratic A s^2 + B s + C in s = z - p_z
      const double w0 = x[i] - p[0], w1 = x[j] - p[1];
      double A = 1, B = 0, C = w0 * w0 + w1 * w1 - r2;
      if (line) {
        const double a0 = w0 * d[0] + w1 * d[1];
        A = 1 - d[2] * d[2];
        B = -2 * d[2] * a0;
        C = w0 * w0 + w1 * w1 - a0 * a0 - r2;
      }
      std::size_t lo = 0, hi = n;
      if (A > 1e-12) {
        const double vertex = -B / (2 * A);
        const double disc = B * B - 4 * A * C;
        if (disc < 0 && C - B * B / (4 * A) > 1e-12 * (1 + r2)) continue;
        const double half = std::sqrt(std::max(disc, 0.0)) / (2 * A) + slack;
        lo = std::lower_bound(x.begin(), x.end(), p[2] + vertex - half) - x.begin();
        hi = std::upper_bound(x.begin(), x.end(), p[2] + vertex + half) - x.begin();
      }
      double row = 0;
      for (std::size_t k = lo; k < hi; ++k)
        if (dist2(x[i], x[j], x[k]) <= r2) row += w[k];
      acc += w[j] * row;
    }
    partial[i] = w[i] * acc;
  });
  double s = 0;
  for (double v : partial) s += v;
  return s;
}

double sublevel_mass(const Quad2& q, const DiscreteMeasure& mu, double t, double delta)
{
  const auto x = mu.positions();
  const auto w = mu.weights();
  double s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double v = q(x[i], x[j]);
      if (v >= t - delta && v <= t + delta) s += w[i] * w[j];
    }
  return s;
}

SublevelProfile sublevel_mass_profile(const Quad2& q, const DiscreteMeasure& mu, double delta)
{
  if (!(std::abs(q.det()) > 1e-12))
    fail(ErrorCode::DegenerateForm, "quadratic form has rank below two");
  if (!(delta > 0))
    fail(ErrorCode::InvalidArgument, "delta must be positive");
  const auto x = mu.positions();
  const auto w = mu.weights();
  std::vector<std::pair<double, double>> vals;
  vals.reserve(x.size() * x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) vals.emplace_back(q(x[i], x[j]), w[i] * w[j]);
  std::sort(vals.begin(), vals.end());
  std::vector<double> prefix(vals.size() + 1, 0);
  for (std::size_t k = 0; k < vals.size(); ++k) prefix[k + 1] = prefix[k] + vals[k].second;

  const auto k0 = static_cast<std::int64_t>(std::floor(vals.front().first / delta));
  const auto k1 = static_cast<std::int64_t>(std::ceil(vals.back().first / delta));
  SublevelProfile out;
  out.sup_mass = -1;
  for (std::int64_t k = k0; k <= k1; ++k) {
    const double t = static_cast<double>(k) * delta;
    const auto lo = std::lower_bound(vals.begin(), vals.end(), t - delta,
                                     [](const auto& e, double v) { return e.first < v; });
    const auto hi = std::upper_bound(vals.begin(), vals.end(), t + delta,
                                     [](double v, const auto& e) { return v < e.first; });
    const double m = prefix[hi - vals.begin()] - prefix[lo - vals.begin()];
    if (m > out.sup_mass) {
      out.sup_mass = m;
      out.argmax_t = t;
    }
  }
  return out;
}

double slice_mass_sup(const BinnedDistribution& nu)
{
  double best = 0;
  // every maximal window can slide right until its left edge is occupied
  for (std::size_t i = 0; i < nu.size(); ++i) {
    double run = 0;
    for (std::size_t j = i; j < nu.size() && nu.bins[j] <= nu.bins[i] + 4; ++j) run += nu.mass[j];
    best = std::max(best, run);
  }
  return best;
}

double slice_mass_sup(const QuadPoly& f, const DiscreteMeasure& mu, double delta)
{
  return slice_mass_sup(pushforward(f, mu, delta));
}

} // namespace quadlab
