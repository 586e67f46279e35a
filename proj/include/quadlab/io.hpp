#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "quadlab/energy.hpp"
#include "quadlab/incidence.hpp"
#include "quadlab/measure.hpp"
#include "quadlab/quadpoly.hpp"

namespace quadlab {

//! {"a": ..., ..., "j": ...}; all nine keys are required.
QuadPoly poly_from_json(const nlohmann::json& j);
nlohmann::json poly_to_json(const QuadPoly& f);
//! A preset name or a JSON object text. Throws ParseError.
QuadPoly parse_poly(const std::string& text);

struct MeasureFile
{
  DiscreteMeasure measure;
  std::optional<double> alpha_hint;
};

//! First line `# {"delta":..., "origin":..., "alpha_hint":...}`, then
//! `index,weight` and one row per atom with 17 significant digits.
void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu,
                       std::optional<double> alpha_hint = std::nullopt);
MeasureFile read_measure_csv(std::istream& in);

//! `# {"bin_width":..., "offset":...}`, then `bin,mass`.
void write_binned_csv(std::ostream& out, const BinnedDistribution& nu);
BinnedDistribution read_binned_csv(std::istream& in);

//! Header `x,y` or `x,y,multiplicity`.
void write_points_csv(std::ostream& out, const PointSet2D& P);
PointSet2D read_points_csv(std::istream& in);

//! Header `theta,a` or `slope,intercept` (X = slope Y + intercept), with an
//! optional third `multiplicity` column. Writing always uses theta,a.
void write_lines_csv(std::ostream& out, const LineFamily& L);
LineFamily read_lines_csv(std::istream& in);

//! File helpers; throw IoFailure when the path cannot be opened.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace quadlab
