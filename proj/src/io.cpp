#include "quadlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "quadlab/error.hpp"

namespace quadlab {

namespace {

const char* const poly_keys[9] = { "a", "b", "c", "d", "e", "g", "h", "i", "j" };

std::string num(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  return out;
}

double to_double(const std::string& s)
{
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "not a number: '" + s + "'");
  }
  if (used != s.size()) fail(ErrorCode::ParseError, "not a number: '" + s + "'");
  return v;
}

std::int64_t to_int(const std::string& s)
{
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::ParseError, "not an integer: '" + s + "'");
  }
  if (used != s.size()) fail(ErrorCode::ParseError, "not an integer: '" + s + "'");
  return v;
}

// Reads an optional `# {json}` line, then the header and the data rows.
struct Table
{
  nlohmann::json meta;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

Table read_table(std::istream& in)
{
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (line[0] == '#') {
      if (!have_header && t.meta.is_null()) {
        try {
          t.meta = nlohmann::json::parse(line.substr(1));
        } catch (const nlohmann::json::exception& e) {
          fail(ErrorCode::ParseError, std::string("bad metadata line: ") + e.what());
        }
      }
      continue;
    }
    auto cells = split(line);
    if (!have_header) {
      t.header = std::move(cells);
      have_header = true;
      continue;
    }
    if (cells.size() != t.header.size())
      fail(ErrorCode::ParseError, "row has " + std::to_string(cells.size()) + " fields, header has " +
                                      std::to_string(t.header.size()));
    t.rows.push_back(std::move(cells));
  }
  if (!have_header) fail(ErrorCode::ParseError, "missing CSV header");
  return t;
}

void expect_header(const Table& t, std::initializer_list<std::vector<std::string>> allowed)
{
  for (const auto& h : allowed)
    if (t.header == h) return;
  std::string got;
  for (const auto& h : t.header) got += (got.empty() ? "" : ",") + h;
  fail(ErrorCode::ParseError, "unexpected CSV header '" + got + "'");
}

double meta_number(const nlohmann::json& meta, const char* key)
{
  if (!meta.is_object() || !meta.contains(key) || !meta[key].is_number())
    fail(ErrorCode::ParseError, std::string("metadata lacks numeric '") + key + "'");
  return meta[key].get<double>();
}

} // namespace

QuadPoly poly_from_json(const nlohmann::json& j)
{
  if (!j.is_object()) fail(ErrorCode::ParseError, "polynomial must be a JSON object");
  std::array<double, 9> k{};
  for (int n = 0; n < 9; ++n) {
    if (!j.contains(poly_keys[n]) || !j[poly_keys[n]].is_number())
      fail(ErrorCode::ParseError, std::string("polynomial lacks numeric '") + poly_keys[n] + "'");
    k[n] = j[poly_keys[n]].get<double>();
  }
  for (const auto& [key, value] : j.items())
    if (std::find_if(std::begin(poly_keys), std::end(poly_keys),
                     [&](const char* p) { return key == p; }) == std::end(poly_keys))
      fail(ErrorCode::ParseError, "unknown polynomial key '" + key + "'");
  return QuadPoly::from_array(k);
}

nlohmann::json poly_to_json(const QuadPoly& f)
{
  nlohmann::json j = nlohmann::json::object();
  const auto k = f.coefficients();
  for (int n = 0; n < 9; ++n) j[poly_keys[n]] = k[n];
  return j;
}

QuadPoly parse_poly(const std::string& text)
{
  for (const auto& name : preset_names())
    if (text == name) return preset(name);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception&) {
    fail(ErrorCode::ParseError, "'" + text + "' is neither a preset nor JSON");
  }
  return poly_from_json(j);
}

void write_measure_csv(std::ostream& out, const DiscreteMeasure& mu, std::optional<double> alpha_hint)
{
  nlohmann::json meta{ { "delta", mu.delta() }, { "origin", mu.origin() } };
  meta["alpha_hint"] = alpha_hint ? nlohmann::json(*alpha_hint) : nlohmann::json(nullptr);
  out << "# " << meta.dump() << "\n";
  out << "index,weight\n";
  for (const Atom& a : mu.atoms()) out << a.index << "," << num(a.weight) << "\n";
}

MeasureFile read_measure_csv(std::istream& in)
{
  const Table t = read_table(in);
  expect_header(t, { { "index", "weight" } });
  std::vector<Atom> atoms;
  for (const auto& r : t.rows) atoms.push_back({ to_int(r[0]), to_double(r[1]) });
  MeasureFile f{ DiscreteMeasure(meta_number(t.meta, "delta"), meta_number(t.meta, "origin"),
                                 std::move(atoms)),
                 std::nullopt };
  if (t.meta.contains("alpha_hint") && t.meta["alpha_hint"].is_number())
    f.alpha_hint = t.meta["alpha_hint"].get<double>();
  return f;
}

void write_binned_csv(std::ostream& out, const BinnedDistribution& nu)
{
  const nlohmann::json meta{ { "bin_width", nu.bin_width }, { "offset", nu.offset } };
  out << "# " << meta.dump() << "\n";
  out << "bin,mass\n";
  for (std::size_t k = 0; k < nu.size(); ++k) out << nu.bins[k] << "," << num(nu.mass[k]) << "\n";
}

BinnedDistribution read_binned_csv(std::istream& in)
{
  const Table t = read_table(in);
  expect_header(t, { { "bin", "mass" } });
  BinnedDistribution nu;
  nu.bin_width = meta_number(t.meta, "bin_width");
  nu.offset = meta_number(t.meta, "offset");
  for (const auto& r : t.rows) {
    const auto b = to_int(r[0]);
    if (!nu.bins.empty() && b <= nu.bins.back())
      fail(ErrorCode::ParseError, "bins must strictly increase");
    nu.bins.push_back(b);
    nu.mass.push_back(to_double(r[1]));
  }
  return nu;
}

void write_points_csv(std::ostream& out, const PointSet2D& P)
{
  out << "x,y,multiplicity\n";
  for (std::size_t k = 0; k < P.size(); ++k)
    out << num(P.points[k].x) << "," << num(P.points[k].y) << "," << P.multiplicity[k] << "\n";
}

PointSet2D read_points_csv(std::istream& in)
{
  const Table t = read_table(in);
  expect_header(t, { { "x", "y" }, { "x", "y", "multiplicity" } });
  PointSet2D P;
  for (const auto& r : t.rows) {
    P.points.push_back({ to_double(r[0]), to_double(r[1]) });
    const std::int64_t m = r.size() > 2 ? to_int(r[2]) : 1;
    if (m < 1) fail(ErrorCode::ParseError, "multiplicity must be at least 1");
    P.multiplicity.push_back(m);
  }
  return P;
}

void write_lines_csv(std::ostream& out, const LineFamily& L)
{
  out << "theta,a,multiplicity\n";
  for (std::size_t k = 0; k < L.size(); ++k)
    out << num(L.lines[k].theta) << "," << num(L.lines[k].a) << "," << L.multiplicity[k] << "\n";
}

LineFamily read_lines_csv(std::istream& in)
{
  const Table t = read_table(in);
  expect_header(t, { { "theta", "a" }, { "theta", "a", "multiplicity" }, { "slope", "intercept" },
                     { "slope", "intercept", "multiplicity" } });
  const bool polar = t.header[0] == "theta";
  LineFamily L;
  for (const auto& r : t.rows) {
    const double u = to_double(r[0]), v = to_double(r[1]);
    const std::int64_t m = r.size() > 2 ? to_int(r[2]) : 1;
    if (m < 1) fail(ErrorCode::ParseError, "multiplicity must be at least 1");
    L.add(polar ? PlanarLine::canonical(u, v) : PlanarLine::from_slope_intercept(u, v), m);
  }
  return L;
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoFailure, "cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::IoFailure, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(ErrorCode::IoFailure, "write to '" + path + "' failed");
}

} // namespace quadlab
