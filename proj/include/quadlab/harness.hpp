#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quadlab/constructions.hpp"
#include "quadlab/measure.hpp"
#include "quadlab/quadpoly.hpp"
#include "quadlab/report.hpp"

namespace quadlab {

struct MeasureSpec
{
  enum class Source { Cantor, Construction, File };
  Source source = Source::Cantor;
  double alpha = 0.5; // Cantor dimension, or the alpha used for a file measure
  int depth = 6;
  ConstructionSpec construction;
  std::string path;
};

struct ScanConfig
{
  //! Defaults to x+yz for measure probes and to the kind's polynomial for constructions.
  std::optional<QuadPoly> poly;
  MeasureSpec measure;
  double delta_max = 1.0 / 64;
  double delta_min = 1.0 / 4096;
  int delta_step = 1; // ladder exponent step
  double kappa = 0.05;
  double tol_fit = 0.15;
  std::string kernel = "bump";
  std::uint64_t seed = 0;
  bool timing = false;
  std::string csv_path;
  std::string svg_path;
};

//! delta_max, delta_max 2^-step, ... down to delta_min. Both ends must be
//! powers of two with delta_min <= delta_max.
std::vector<double> delta_ladder(double delta_max, double delta_min, int step = 1);

//! Overlays the keys present in j onto base. Keys: poly, measure{source,
//! alpha, depth, kind, path, cantor_depth, p_S, p_A, c, c1, strict},
//! delta_max, delta_min, delta_step, kappa, tol_fit, kernel, seed, timing,
//! csv, svg. Unknown keys throw ParseError.
ScanConfig scan_config_from_json(const nlohmann::json& j, ScanConfig base = {});

//! Rejects a polynomial that is not NonDegenerate before any energy work
//! (DegeneratePolynomial). Construction measures route to verify_lower_bound;
//! otherwise every ladder point gets pushforward, smoothed_energy,
//! coincidence_split and slice_mass_sup. Upper probes pass when
//! slope >= (alpha - 1) - tol_fit and report eps_hat = slope - (alpha - 1)
//! with a band of two standard errors.
ScanReport run_scan(const ScanConfig& cfg);

//! Header delta,energy,I0,I1,I2,I3,I4,I5,I6,slice_sup,runtime_ms; numbers
//! with 17 significant digits; split fields empty when absent.
void write_report_csv(std::ostream& out, const ScanReport& rep);
//! Standalone SVG: one <circle> per row and one <line> for the fit.
void write_report_svg(std::ostream& out, const ScanReport& rep);
//! Writes the CSV and, when svg_path is non-empty, the plot. Throws IoFailure.
void emit_report(const ScanReport& rep, const std::string& csv_path,
                 const std::string& svg_path = "");

} // namespace quadlab
