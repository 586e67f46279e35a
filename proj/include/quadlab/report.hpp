#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quadlab/fit.hpp"

namespace quadlab {

struct ScanRow
{
  double delta = 0;
  double energy = 0;
  //! I0..I6 and the coincidence total; absent for construction probes.
  std::optional<std::array<double, 7>> split;
  std::optional<double> coincidence;
  double slice_sup = 0;
  double runtime_ms = 0; // 0 unless timing was requested
  //! Probe-specific per-row numbers (ratio, admissibility, Frostman constant, ...).
  std::map<std::string, double> diagnostics;
};

enum class Verdict { Pass, Fail, Inconclusive };

std::string to_string(Verdict v);

struct ScanReport
{
  std::string probe;        // "upper" or the construction kind
  std::vector<ScanRow> rows;
  FitResult fit;
  double claimed_exponent = 0;
  double tol_fit = 0.15;
  Verdict verdict = Verdict::Inconclusive;
  //! slope - (alpha - 1) and a two-standard-error band; upper probes only.
  std::optional<double> eps_hat;
  std::optional<double> eps_band;
  std::vector<std::string> notes;
};

} // namespace quadlab
