#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace quadlab {

struct Atom
{
  std::int64_t index = 0;
  double weight = 0;
};

//! Probability measure made of atoms at origin + index * delta.
//! delta is a power of two, indices strictly increase, weights are >= 0 and
//! sum to 1 within 1e-12.
class DiscreteMeasure
{
public:
  DiscreteMeasure() = default;
  //! Validates every invariant; throws InvalidArgument otherwise.
  DiscreteMeasure(double delta, double origin, std::vector<Atom> atoms);

  //! Sorts, merges repeated indices, drops zero weights and rescales to mass 1.
  static DiscreteMeasure normalized(double delta, double origin, std::vector<Atom> atoms);

  double delta() const { return delta_; }
  double origin() const { return origin_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double position(std::size_t k) const
  {
    return origin_ + static_cast<double>(atoms_[k].index) * delta_;
  }
  std::vector<double> positions() const;
  std::vector<std::int64_t> indices() const;
  std::vector<double> weights() const;

  //! Distance between the outermost atoms.
  double diameter() const;
  double total_mass() const;

private:
  double delta_ = 1;
  double origin_ = 0;
  std::vector<Atom> atoms_;
};

bool is_power_of_two(double x);

//! Two-branch self-similar measure with ratio r = 2^{-1/alpha} and uniform
//! weights 2^{-depth} at the left endpoints of the depth-level intervals.
//! delta is the largest power of two <= r^depth, so atoms stay separated.
//! Throws DepthTooLarge when depth > 24.
DiscreteMeasure build_cantor(double alpha, int depth);

//! max over atom-centred closed windows [x - r, x + r], r = delta 2^k up to
//! the first r >= diameter, of mu(window) / (2r)^alpha. Restricting to these
//! windows underestimates the supremum over all balls by at most a factor 2
//! in radius.
double frostman_constant(const DiscreteMeasure& mu, double alpha);

struct AdRegularity
{
  double lower_const = 0; // max (2r)^alpha / mu(window)
  double upper_const = 0; // max mu(window) / (2r)^alpha
};

//! Same window family as frostman_constant.
AdRegularity ad_regular_check(const DiscreteMeasure& mu, double alpha);

// ---------------------------------------------------------------------------
// Dyadic level decomposition

using IndexSet = std::vector<std::int64_t>;

struct LevelDecomposition
{
  std::map<int, IndexSet> levels;
  std::map<int, double> level_mass;
  double c_mu = 1;
  double delta = 1;
  double alpha = 1;
};

//! Level k holds the atoms with 2^{-(k+1)} delta^alpha < w <= c_mu 2^{-k} delta^alpha,
//! k the smallest admissible value. Throws UnassignedAtom when an atom fits
//! no level (weight above c_mu delta^alpha).
LevelDecomposition dyadic_levels(const DiscreteMeasure& mu, double alpha, double c_mu);

// ---------------------------------------------------------------------------
// Non-concentration on index sets

//! Half-open window [start, start + cells) in grid units.
struct IndexWindow
{
  std::int64_t start = 0;
  std::int64_t cells = 0;
  std::int64_t count = 0;
};

struct NonConcentration
{
  bool pass = true;
  double worst_ratio = 0; // max count / ((cells)^alpha)
  IndexWindow witness;    // first violating window, or the worst one on pass
};

//! Checks |M cap J| <= K |J|^alpha delta^{-alpha} on windows anchored at
//! elements of M with lengths delta 2^k up to the first length >= the span of
//! M. In grid units the bound reads count <= K cells^alpha, so delta only
//! enters through the grid. Anchored dyadic windows undercount the worst
//! real interval by at most a factor 2 in length.
NonConcentration nonconcentration_check(const IndexSet& M, double alpha, double K);

//! Smallest K for which nonconcentration_check passes.
double nonconcentration_constant(const IndexSet& M, double alpha);

struct SeparatedClassPartition
{
  std::vector<IndexSet> classes;
  int L = 0;
};

//! L = ceil(2K) + 1 classes by residue of the 1-based position in M.
//! Throws PreconditionFail (with the witness window) when M violates the
//! K-bound on some tested window.
SeparatedClassPartition partition_nonconcentrated(const IndexSet& M, double alpha, double K);

//! Per-level class counts L_k = ceil(2 K_k) + 1 where K_k is the measured
//! non-concentration constant of M_k.
struct LevelClassCount
{
  int k = 0;
  std::size_t size = 0;
  double K = 0;
  int L = 0;
};

std::vector<LevelClassCount> level_class_counts(const LevelDecomposition& dec);

} // namespace quadlab
