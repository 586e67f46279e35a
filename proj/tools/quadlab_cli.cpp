// quadlab command line: classification, measures, energy scans, incidences,
// constructions and exponent fits.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "quadlab/constructions.hpp"
#include "quadlab/energy.hpp"
#include "quadlab/error.hpp"
#include "quadlab/fit.hpp"
#include "quadlab/harness.hpp"
#include "quadlab/incidence.hpp"
#include "quadlab/io.hpp"
#include "quadlab/measure.hpp"
#include "quadlab/quadpoly.hpp"

using namespace quadlab;
using nlohmann::json;

namespace {

json vec_json(const Vec3& v)
{
  return json::array({ v[0], v[1], v[2] });
}

json affine_json(const Affine3& a)
{
  return json{ { "x", a.cx }, { "y", a.cy }, { "z", a.cz }, { "const", a.c0 } };
}

// "2^-6..2^-12" -> (2^-6, 2^-12)
std::pair<double, double> parse_ladder(const std::string& s)
{
  static const std::regex re(R"(\s*2\^(-?\d+)\s*\.\.\s*2\^(-?\d+)\s*)");
  std::smatch m;
  if (!std::regex_match(s, m, re))
    fail(ErrorCode::ParseError, "ladder must look like 2^-6..2^-12, got '" + s + "'");
  return { std::ldexp(1.0, std::stoi(m[1])), std::ldexp(1.0, std::stoi(m[2])) };
}

void output(const std::string& text, const std::string& path)
{
  if (path.empty())
    std::cout << text;
  else
    write_file(path, text);
}

void print_summary(const ScanReport& rep)
{
  json s{ { "probe", rep.probe },
          { "slope", rep.fit.slope },
          { "intercept", rep.fit.intercept },
          { "r_squared", rep.fit.r_squared },
          { "slope_stderr", rep.fit.slope_stderr },
          { "claimed_exponent", rep.claimed_exponent },
          { "tol_fit", rep.tol_fit },
          { "verdict", to_string(rep.verdict) },
          { "notes", rep.notes } };
  if (rep.eps_hat) {
    s["eps_hat"] = *rep.eps_hat;
    s["eps_band"] = *rep.eps_band;
  }
  json rows = json::array();
  for (const auto& r : rep.rows) {
    json row{ { "delta", r.delta }, { "energy", r.energy } };
    for (const auto& [k, v] : r.diagnostics) row[k] = v;
    rows.push_back(row);
  }
  s["rows"] = rows;
  std::cerr << s.dump(2) << "\n";
}

void emit(const ScanReport& rep, const ScanConfig& cfg)
{
  std::ostringstream csv;
  write_report_csv(csv, rep);
  output(csv.str(), cfg.csv_path);
  if (!cfg.svg_path.empty()) {
    std::ostringstream svg;
    write_report_svg(svg, rep);
    write_file(cfg.svg_path, svg.str());
  }
  print_summary(rep);
}

ScanConfig load_config(const std::string& path)
{
  if (path.empty()) return {};
  try {
    return scan_config_from_json(json::parse(read_file(path)));
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config: ") + e.what());
  }
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{ "quadlab: pushforward energies of quadratic polynomials under fractal measures" };
  app.require_subcommand(1);

  // classify ---------------------------------------------------------------
  auto* classify_cmd = app.add_subcommand("classify", "classify a polynomial and report its critical set");
  std::string poly_text;
  classify_cmd->add_option("--poly", poly_text, "preset name or JSON object")->required();

  // measure ----------------------------------------------------------------
  auto* measure_cmd = app.add_subcommand("measure", "build or check a discrete measure");
  measure_cmd->require_subcommand(1);
  auto* mbuild = measure_cmd->add_subcommand("build", "write a Cantor measure as CSV");
  double m_alpha = 0.5;
  int m_depth = 6;
  std::string m_out;
  mbuild->add_option("--alpha", m_alpha, "dimension in (0, 1]");
  mbuild->add_option("--depth", m_depth, "construction depth");
  mbuild->add_option("--out", m_out, "output path (stdout when omitted)");
  auto* mcheck = measure_cmd->add_subcommand("check", "Frostman, AD-regularity and non-concentration constants");
  std::string m_in;
  double m_check_alpha = 0.5;
  mcheck->add_option("--in", m_in, "measure CSV")->required();
  mcheck->add_option("--alpha", m_check_alpha, "exponent to test");

  // energy scan ------------------------------------------------------------
  auto* energy_cmd = app.add_subcommand("energy", "energy scans");
  energy_cmd->require_subcommand(1);
  auto* scan_cmd = energy_cmd->add_subcommand("scan", "delta-ladder scan with exponent fit");
  std::string s_config, s_poly, s_measure, s_csv, s_svg;
  double s_alpha = 0, s_dmin = 0, s_dmax = 0, s_kappa = 0, s_tol = 0;
  int s_depth = 0, s_step = 0;
  bool s_timing = false;
  scan_cmd->add_option("--config", s_config, "JSON config; flags override it");
  scan_cmd->add_option("--poly", s_poly, "preset name or JSON object");
  scan_cmd->add_option("--measure", s_measure, "'cantor' or a measure CSV path");
  scan_cmd->add_option("--alpha", s_alpha, "Cantor dimension");
  scan_cmd->add_option("--depth", s_depth, "Cantor depth");
  scan_cmd->add_option("--delta-min", s_dmin, "smallest delta (power of two)");
  scan_cmd->add_option("--delta-max", s_dmax, "largest delta (power of two)");
  scan_cmd->add_option("--delta-step", s_step, "ladder exponent step");
  scan_cmd->add_option("--kappa", s_kappa, "gradient threshold exponent in (0, 1/2)");
  scan_cmd->add_option("--tol-fit", s_tol, "slope tolerance");
  scan_cmd->add_option("--csv", s_csv, "report CSV path (stdout when omitted)");
  scan_cmd->add_option("--svg", s_svg, "plot path");
  scan_cmd->add_flag("--timing", s_timing, "record runtime_ms");

  // incidence --------------------------------------------------------------
  auto* inc_cmd = app.add_subcommand("incidence", "delta-incidence counting");
  inc_cmd->require_subcommand(1);
  auto* count_cmd = inc_cmd->add_subcommand("count", "count incidences between CSV point and line files");
  std::string i_points, i_lines;
  double i_delta = 0;
  bool i_brute = false;
  count_cmd->add_option("--points", i_points, "points CSV (x,y[,multiplicity])")->required();
  count_cmd->add_option("--lines", i_lines, "lines CSV (theta,a or slope,intercept)")->required();
  count_cmd->add_option("--delta", i_delta, "tube radius")->required();
  count_cmd->add_flag("--brute", i_brute, "use the brute-force backend");
  auto* bench_cmd = inc_cmd->add_subcommand("bench", "timing and count CSV for both backends");
  std::size_t b_points = 1000, b_lines = 1000;
  int b_reps = 3;
  double b_delta = 0.01;
  std::uint64_t b_seed = 0;
  bench_cmd->add_option("--points", b_points, "number of random points");
  bench_cmd->add_option("--lines", b_lines, "number of random lines");
  bench_cmd->add_option("--delta", b_delta, "tube radius");
  bench_cmd->add_option("--reps", b_reps, "instances");
  bench_cmd->add_option("--seed", b_seed, "random seed");

  // construct / verify -----------------------------------------------------
  auto* construct_cmd = app.add_subcommand("construct", "write a construction measure as CSV");
  std::string c_kind = "frostman-necessity", c_out;
  double c_delta = 1.0 / 4096, c_alpha = 0.25;
  int c_cantor_depth = 5;
  bool c_strict = false;
  construct_cmd->add_option("--kind", c_kind, "frostman-necessity | unbounded-support | divergent-energy");
  construct_cmd->add_option("--delta", c_delta, "scale (power of two)");
  construct_cmd->add_option("--alpha", c_alpha, "alpha parameter");
  construct_cmd->add_option("--cantor-depth", c_cantor_depth, "depth for divergent-energy");
  construct_cmd->add_flag("--strict", c_strict, "reject inadmissible delta");
  construct_cmd->add_option("--out", c_out, "output path (stdout when omitted)");

  auto* verify_cmd = app.add_subcommand("verify", "lower-bound probe for a construction");
  std::string v_config, v_kind, v_ladder, v_csv, v_svg;
  double v_alpha = 0;
  int v_step = 0;
  bool v_timing = false;
  verify_cmd->add_option("--config", v_config, "JSON config; flags override it");
  verify_cmd->add_option("--kind", v_kind, "construction kind");
  verify_cmd->add_option("--ladder", v_ladder, "e.g. 2^-6..2^-12");
  verify_cmd->add_option("--step", v_step, "ladder exponent step");
  verify_cmd->add_option("--alpha", v_alpha, "alpha parameter");
  verify_cmd->add_option("--csv", v_csv, "report CSV path (stdout when omitted)");
  verify_cmd->add_option("--svg", v_svg, "plot path");
  verify_cmd->add_flag("--timing", v_timing, "record runtime_ms");

  // fit --------------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "least-squares exponent of (delta, value) pairs");
  std::string f_in;
  fit_cmd->add_option("--in", f_in, "CSV with columns delta,value (stdin when omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*classify_cmd) {
      const QuadPoly f = parse_poly(poly_text);
      const JacobianPolys J = jacobian_polynomials(f);
      json out{ { "poly", poly_to_json(f) },
                { "classification", std::string(to_string(classify(f))) },
                { "jacobians", { { "Jx", affine_json(J.jx) }, { "Jy", affine_json(J.jy) }, { "Jz", affine_json(J.jz) } } },
                { "hessian_rank", hessian_rank(f) } };
      try {
        const CriticalSet K = critical_set(f);
        out["critical_set"] = { { "kind", std::string(to_string(K.kind)) },
                                { "point", vec_json(K.point) },
                                { "direction", vec_json(K.direction) } };
      } catch (const Error& e) {
        out["critical_set"] = { { "error", std::string(to_string(e.code())) } };
      }
      std::cout << out.dump(2) << "\n";
    } else if (*mbuild) {
      std::ostringstream ss;
      write_measure_csv(ss, build_cantor(m_alpha, m_depth), m_alpha);
      output(ss.str(), m_out);
    } else if (*mcheck) {
      std::istringstream in(read_file(m_in));
      const MeasureFile file = read_measure_csv(in);
      const DiscreteMeasure& mu = file.measure;
      const AdRegularity ad = ad_regular_check(mu, m_check_alpha);
      json out{ { "atoms", mu.size() },
                { "delta", mu.delta() },
                { "total_mass", mu.total_mass() },
                { "alpha", m_check_alpha },
                { "frostman_constant", ad.upper_const },
                { "ad_lower_constant", ad.lower_const },
                { "nonconcentration_constant", nonconcentration_constant(mu.indices(), m_check_alpha) } };
      std::cout << out.dump(2) << "\n";
    } else if (*scan_cmd) {
      ScanConfig cfg = load_config(s_config);
      if (scan_cmd->count("--poly")) cfg.poly = parse_poly(s_poly);
      if (scan_cmd->count("--measure")) {
        if (s_measure == "cantor") {
          cfg.measure.source = MeasureSpec::Source::Cantor;
        } else {
          cfg.measure.source = MeasureSpec::Source::File;
          cfg.measure.path = s_measure;
        }
      }
      if (scan_cmd->count("--alpha")) cfg.measure.alpha = s_alpha;
      if (scan_cmd->count("--depth")) cfg.measure.depth = s_depth;
      if (scan_cmd->count("--delta-min")) cfg.delta_min = s_dmin;
      if (scan_cmd->count("--delta-max")) cfg.delta_max = s_dmax;
      if (scan_cmd->count("--delta-step")) cfg.delta_step = s_step;
      if (scan_cmd->count("--kappa")) cfg.kappa = s_kappa;
      if (scan_cmd->count("--tol-fit")) cfg.tol_fit = s_tol;
      if (scan_cmd->count("--csv")) cfg.csv_path = s_csv;
      if (scan_cmd->count("--svg")) cfg.svg_path = s_svg;
      if (s_timing) cfg.timing = true;
      emit(run_scan(cfg), cfg);
    } else if (*count_cmd) {
      std::istringstream ps(read_file(i_points)), ls(read_file(i_lines));
      const PointSet2D P = read_points_csv(ps);
      const LineFamily L = read_lines_csv(ls);
      std::cout << (i_brute ? count_incidences_brute(P, L, i_delta) : count_incidences(P, L, i_delta)) << "\n";
    } else if (*bench_cmd) {
      std::mt19937_64 rng(b_seed);
      std::uniform_real_distribution<double> U(0, 1), TH(0, 2 * 3.141592653589793);
      std::cout << "instance,backend,points,lines,delta,count,ms\n";
      for (int rep = 0; rep < b_reps; ++rep) {
        PointSet2D P;
        for (std::size_t k = 0; k < b_points; ++k) {
          P.points.push_back({ U(rng), U(rng) });
          P.multiplicity.push_back(1);
        }
        LineFamily L;
        for (std::size_t k = 0; k < b_lines; ++k) L.add(PlanarLine::canonical(TH(rng), U(rng)));
        for (int backend = 0; backend < 2; ++backend) {
          const auto t0 = std::chrono::steady_clock::now();
          const auto n = backend == 0 ? count_incidences_brute(P, L, b_delta) : count_incidences(P, L, b_delta);
          const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
          std::cout << rep << "," << (backend == 0 ? "brute" : "grid") << "," << b_points << "," << b_lines
                    << "," << b_delta << "," << n << "," << ms << "\n";
        }
      }
    } else if (*construct_cmd) {
      ConstructionSpec spec;
      spec.kind = construction_kind_from_string(c_kind);
      spec.alpha = c_alpha;
      spec.cantor_depth = c_cantor_depth;
      spec.strict = c_strict;
      const DiscreteMeasure mu = build_construction(spec, c_delta);
      std::ostringstream ss;
      write_measure_csv(ss, mu, spec.kind == ConstructionKind::UnboundedSupport ? 0.5 : spec.alpha);
      output(ss.str(), c_out);
      if (spec.kind == ConstructionKind::FrostmanNecessity) {
        const auto adm = frostman_necessity_admissibility(spec.alpha, c_delta, spec.c1,
                                                          SmoothingKernel::bump().eta());
        std::cerr << json{ { "admissible", adm.admissible }, { "lhs", adm.lhs }, { "rhs", adm.rhs } }.dump() << "\n";
      }
    } else if (*verify_cmd) {
      ScanConfig cfg = load_config(v_config);
      cfg.measure.source = MeasureSpec::Source::Construction;
      if (verify_cmd->count("--kind")) {
        cfg.measure.construction.kind = construction_kind_from_string(v_kind);
        cfg.poly.reset();
      }
      if (verify_cmd->count("--alpha")) cfg.measure.construction.alpha = v_alpha;
      if (verify_cmd->count("--ladder")) std::tie(cfg.delta_max, cfg.delta_min) = parse_ladder(v_ladder);
      if (verify_cmd->count("--step")) cfg.delta_step = v_step;
      else if (!verify_cmd->count("--config") &&
               cfg.measure.construction.kind == ConstructionKind::UnboundedSupport)
        cfg.delta_step = 2; // that construction needs even exponents
      if (verify_cmd->count("--csv")) cfg.csv_path = v_csv;
      if (verify_cmd->count("--svg")) cfg.svg_path = v_svg;
      if (v_timing) cfg.timing = true;
      emit(run_scan(cfg), cfg);
    } else if (*fit_cmd) {
      std::string text;
      if (f_in.empty()) {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
      } else {
        text = read_file(f_in);
      }
      std::istringstream in(text);
      std::string line;
      std::vector<std::pair<double, double>> pts;
      bool header = true;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (header) {
          header = false;
          if (line.rfind("delta", 0) == 0) continue;
        }
        double d = 0, v = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &d, &v) != 2)
          fail(ErrorCode::ParseError, "bad fit row '" + line + "'");
        pts.emplace_back(d, v);
      }
      const FitResult r = fit_exponent(pts);
      std::cout << json{ { "slope", r.slope }, { "intercept", r.intercept }, { "r_squared", r.r_squared },
                         { "slope_stderr", r.slope_stderr }, { "n", r.n } }.dump(2)
                << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
