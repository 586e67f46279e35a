#include "quadlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "quadlab/energy.hpp"
#include "quadlab/error.hpp"
#include "quadlab/fit.hpp"
#include "quadlab/io.hpp"

namespace quadlab {

namespace {

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string xml_escape(const std::string& s)
{
  std::string out;
  for (char ch : s) {
    switch (ch) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += ch;
    }
  }
  return out;
}

template <typename T>
T get_as(const nlohmann::json& j, const char* key)
{
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("config key '") + key + "': " + e.what());
  }
}

void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const char* where)
{
  for (const auto& [key, value] : j.items())
    if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; }))
      fail(ErrorCode::ParseError, "unknown " + std::string(where) + " key '" + key + "'");
}

MeasureSpec::Source source_from_string(const std::string& s)
{
  if (s == "cantor") return MeasureSpec::Source::Cantor;
  if (s == "construction") return MeasureSpec::Source::Construction;
  if (s == "file") return MeasureSpec::Source::File;
  fail(ErrorCode::ParseError, "unknown measure source '" + s + "'");
}

} // namespace

std::vector<double> delta_ladder(double delta_max, double delta_min, int step)
{
  if (!is_power_of_two(delta_max) || !is_power_of_two(delta_min))
    fail(ErrorCode::InvalidArgument, "ladder ends must be powers of two");
  if (!(delta_min <= delta_max))
    fail(ErrorCode::InvalidArgument, "delta_min must not exceed delta_max");
  if (step < 1) fail(ErrorCode::InvalidArgument, "ladder step must be positive");
  std::vector<double> out;
  for (double d = delta_max; d >= delta_min; d = std::ldexp(d, -step)) out.push_back(d);
  return out;
}

ScanConfig scan_config_from_json(const nlohmann::json& j, ScanConfig cfg)
{
  if (!j.is_object()) fail(ErrorCode::ParseError, "config must be a JSON object");
  reject_unknown(j,
                 { "poly", "measure", "delta_max", "delta_min", "delta_step", "kappa", "tol_fit",
                   "kernel", "seed", "timing", "csv", "svg" },
                 "config");
  if (j.contains("poly")) {
    const auto& p = j["poly"];
    cfg.poly = p.is_string() ? parse_poly(p.get<std::string>()) : poly_from_json(p);
  }
  if (j.contains("measure")) {
    const auto& m = j["measure"];
    if (!m.is_object()) fail(ErrorCode::ParseError, "measure must be an object");
    reject_unknown(m,
                   { "source", "alpha", "depth", "kind", "path", "cantor_depth", "p_S", "p_A", "c",
                     "c1", "strict" },
                   "measure");
    MeasureSpec& ms = cfg.measure;
    if (m.contains("source")) ms.source = source_from_string(get_as<std::string>(m, "source"));
    if (m.contains("alpha")) {
      ms.alpha = get_as<double>(m, "alpha");
      ms.construction.alpha = ms.alpha;
    }
    if (m.contains("depth")) ms.depth = get_as<int>(m, "depth");
    if (m.contains("path")) ms.path = get_as<std::string>(m, "path");
    if (m.contains("kind"))
      ms.construction.kind = construction_kind_from_string(get_as<std::string>(m, "kind"));
    if (m.contains("cantor_depth")) ms.construction.cantor_depth = get_as<int>(m, "cantor_depth");
    if (m.contains("p_S")) ms.construction.p_S = get_as<double>(m, "p_S");
    if (m.contains("p_A")) ms.construction.p_A = get_as<double>(m, "p_A");
    if (m.contains("c")) ms.construction.c = get_as<double>(m, "c");
    if (m.contains("c1")) ms.construction.c1 = get_as<double>(m, "c1");
    if (m.contains("strict")) ms.construction.strict = get_as<bool>(m, "strict");
  }
  if (j.contains("delta_max")) cfg.delta_max = get_as<double>(j, "delta_max");
  if (j.contains("delta_min")) cfg.delta_min = get_as<double>(j, "delta_min");
  if (j.contains("delta_step")) cfg.delta_step = get_as<int>(j, "delta_step");
  if (j.contains("kappa")) cfg.kappa = get_as<double>(j, "kappa");
  if (j.contains("tol_fit")) cfg.tol_fit = get_as<double>(j, "tol_fit");
  if (j.contains("kernel")) cfg.kernel = get_as<std::string>(j, "kernel");
  if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
  if (j.contains("timing")) cfg.timing = get_as<bool>(j, "timing");
  if (j.contains("csv")) cfg.csv_path = get_as<std::string>(j, "csv");
  if (j.contains("svg")) cfg.svg_path = get_as<std::string>(j, "svg");
  return cfg;
}

ScanReport run_scan(const ScanConfig& cfg)
{
  if (cfg.kernel != "bump") fail(ErrorCode::InvalidArgument, "unknown kernel '" + cfg.kernel + "'");
  if (!(cfg.kappa > 0 && cfg.kappa < 0.5))
    fail(ErrorCode::InvalidArgument, "kappa must lie in (0, 1/2)");
  const bool construction = cfg.measure.source == MeasureSpec::Source::Construction;
  const QuadPoly f = cfg.poly.value_or(construction ? construction_poly(cfg.measure.construction.kind)
                                                    : preset("x+yz"));

  // gate before any energy work
  const Classification cls = classify(f);
  if (cls != Classification::NonDegenerate)
    fail(ErrorCode::DegeneratePolynomial,
         "run refused: classifier verdict " + std::string(to_string(cls)));

  const auto ladder = delta_ladder(cfg.delta_max, cfg.delta_min, cfg.delta_step);
  const SmoothingKernel& kernel = SmoothingKernel::bump();
  if (construction) {
    ScanReport rep = verify_lower_bound(cfg.measure.construction, ladder, f, kernel, cfg.timing);
    rep.tol_fit = cfg.tol_fit;
    return rep;
  }

  DiscreteMeasure mu;
  double alpha = cfg.measure.alpha;
  if (cfg.measure.source == MeasureSpec::Source::Cantor) {
    mu = build_cantor(cfg.measure.alpha, cfg.measure.depth);
  } else {
    std::istringstream in(read_file(cfg.measure.path));
    MeasureFile file = read_measure_csv(in);
    mu = std::move(file.measure);
    if (file.alpha_hint) alpha = *file.alpha_hint;
  }
  if (ladder.size() < 3)
    fail(ErrorCode::InsufficientData, "a scan needs at least 3 deltas");
  if (mu.delta() > ladder.back())
    fail(ErrorCode::InvalidArgument, "measure pitch is coarser than delta_min");

  ScanReport rep;
  rep.probe = "upper";
  rep.claimed_exponent = alpha - 1;
  rep.tol_fit = cfg.tol_fit;
  std::vector<std::pair<double, double>> pts;
  for (double delta : ladder) {
    const auto t0 = std::chrono::steady_clock::now();
    const BinnedDistribution nu = pushforward(f, mu, delta);
    const CoincidenceSplit split = coincidence_split(f, mu, delta, cfg.kappa);
    ScanRow row;
    row.delta = delta;
    row.energy = smoothed_energy(nu, delta, kernel);
    std::array<double, 7> I{};
    std::copy(std::begin(split.I), std::end(split.I), I.begin());
    row.split = I;
    row.coincidence = split.total;
    row.slice_sup = slice_mass_sup(nu);
    row.diagnostics["ratio"] = row.energy / std::pow(delta, rep.claimed_exponent);
    if (cfg.timing)
      row.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    pts.emplace_back(delta, row.energy);
    rep.rows.push_back(std::move(row));
  }
  rep.fit = fit_exponent(pts);
  rep.eps_hat = rep.fit.slope - rep.claimed_exponent;
  rep.eps_band = 2 * rep.fit.slope_stderr;
  rep.verdict = rep.fit.slope >= rep.claimed_exponent - rep.tol_fit ? Verdict::Pass : Verdict::Fail;
  rep.notes.push_back("eps_hat = " + short_num(*rep.eps_hat) + " +- " + short_num(*rep.eps_band) +
                      " (not a pass/fail criterion)");
  return rep;
}

void write_report_csv(std::ostream& out, const ScanReport& rep)
{
  out << "delta,energy,I0,I1,I2,I3,I4,I5,I6,slice_sup,runtime_ms\n";
  for (const ScanRow& r : rep.rows) {
    out << num(r.delta) << "," << num(r.energy);
    for (int k = 0; k < 7; ++k) out << "," << (r.split ? num((*r.split)[k]) : "");
    out << "," << num(r.slice_sup) << "," << num(r.runtime_ms) << "\n";
  }
}

void write_report_svg(std::ostream& out, const ScanReport& rep)
{
  const double W = 640, H = 480, left = 70, right = 610, top = 40, bottom = 420;
  std::vector<double> xs, ys;
  for (const ScanRow& r : rep.rows)
    if (r.delta > 0 && r.energy > 0) {
      xs.push_back(std::log2(r.delta));
      ys.push_back(std::log2(r.energy));
    }
  double x0 = -1, x1 = 0, y0 = -1, y1 = 0;
  if (!xs.empty()) {
    x0 = *std::min_element(xs.begin(), xs.end()) - 0.5;
    x1 = *std::max_element(xs.begin(), xs.end()) + 0.5;
    y0 = *std::min_element(ys.begin(), ys.end()) - 0.5;
    y1 = *std::max_element(ys.begin(), ys.end()) + 0.5;
  }
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (right - left); };
  auto py = [&](double y) { return bottom - (y - y0) / (y1 - y0) * (bottom - top); };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\""
      << bottom - top << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << left << "\" y=\"25\" font-family=\"sans-serif\" font-size=\"14\">"
      << xml_escape(rep.probe + ": slope " + short_num(rep.fit.slope) + ", claimed " +
                    short_num(rep.claimed_exponent))
      << "</text>\n";
  out << "<text x=\"" << (left + right) / 2 << "\" y=\"455\" font-family=\"sans-serif\" "
      << "font-size=\"12\" text-anchor=\"middle\">log2 delta</text>\n";
  out << "<text x=\"20\" y=\"" << (top + bottom) / 2 << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << (top + bottom) / 2
      << ")\">log2 energy</text>\n";
  for (std::size_t k = 0; k < xs.size(); ++k)
    out << "<circle cx=\"" << short_num(px(xs[k])) << "\" cy=\"" << short_num(py(ys[k]))
        << "\" r=\"4\" fill=\"#1f5fa8\"/>\n";
  if (rep.fit.n >= 2 && !xs.empty()) {
    const double a = x0 + 0.5, b = x1 - 0.5;
    out << "<line x1=\"" << short_num(px(a)) << "\" y1=\""
        << short_num(py(rep.fit.intercept + rep.fit.slope * a)) << "\" x2=\"" << short_num(px(b))
        << "\" y2=\"" << short_num(py(rep.fit.intercept + rep.fit.slope * b))
        << "\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n";
  }
  out << "</svg>\n";
}

void emit_report(const ScanReport& rep, const std::string& csv_path, const std::string& svg_path)
{
  std::ostringstream csv;
  write_report_csv(csv, rep);
  write_file(csv_path, csv.str());
  if (!svg_path.empty()) {
    std::ostringstream svg;
    write_report_svg(svg, rep);
    write_file(svg_path, svg.str());
  }
}

} // namespace quadlab
