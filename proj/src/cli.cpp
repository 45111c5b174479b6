// Copyright 2026 The gausstail Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gausstail/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gausstail/expansion.hpp"
#include "gausstail/geometry2d.hpp"
#include "gausstail/geometry3d.hpp"
#include "gausstail/geometry_io.hpp"
#include "gausstail/monte_carlo.hpp"
#include "gausstail/tube_oracle.hpp"

namespace gausstail::cli {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("failed writing " + path.string());
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Run manifest. The CSV copy omits wall time so that reruns are byte-identical.
struct Manifest {
  std::string command;
  std::string input_sha256;
  std::optional<std::uint64_t> seed;
  json parameters = json::object();
  std::string started_at = utc_now();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  json to_json() const {
    json j;
    j["command"] = command;
    j["tool_version"] = kVersion;
    j["input_sha256"] = input_sha256;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["parameters"] = parameters;
    j["started_at"] = started_at;
    j["wall_time_seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return j;
  }

  std::string csv_header() const {
    std::string s = "# command=" + command + "\n# tool_version=" + kVersion + "\n";
    if (!input_sha256.empty()) s += "# input_sha256=" + input_sha256 + "\n";
    if (seed) s += "# seed=" + std::to_string(*seed) + "\n";
    for (const auto& [k, v] : parameters.items()) s += "# " + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump()) + "\n";
    return s;
  }
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv(const Manifest& m) const {
    std::string s = m.csv_header();
    for (std::size_t i = 0; i < columns.size(); ++i) s += (i ? "," : "") + columns[i];
    s += "\n";
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + r[i];
      s += "\n";
    }
    return s;
  }

  json records() const {
    json arr = json::array();
    for (const auto& r : rows) {
      json o;
      for (std::size_t i = 0; i < columns.size(); ++i) {
        char* end = nullptr;
        const double v = std::strtod(r[i].c_str(), &end);
        if (r[i].empty())
          o[columns[i]] = nullptr;
        else if (end && *end == '\0' && std::isfinite(v))
          o[columns[i]] = v;
        else
          o[columns[i]] = r[i];
      }
      arr.push_back(o);
    }
    return arr;
  }
};

// Emits the CSV to `out`, or to PATH.csv plus PATH.json when --out is given.
void emit(const Table& table, const Manifest& m, json record, const std::string& out_path, std::ostream& out) {
  const std::string csv = table.csv(m);
  if (out_path.empty()) {
    out << csv;
    return;
  }
  write_file(out_path + ".csv", csv);
  record["manifest"] = m.to_json();
  record["rows"] = table.records();
  write_file(out_path + ".json", record.dump(2) + "\n");
}

struct LoadedGeometry {
  GeometryDocument doc;
  std::string sha256;
};

LoadedGeometry load(const std::string& path) {
  if (path.empty()) throw InputError("--geometry is required");
  const std::string text = read_file(path);
  return {parse_geometry(text), sha256_hex(text)};
}

json coeffs_json(const SteinerCoeffs2D& c) { return {{"sigma2", c.sigma2}, {"l1", c.l1}, {"l0", c.l0}}; }
json coeffs_json(const SteinerCoeffs3D& c) { return {{"l1", c.l1}, {"l2", c.l2}, {"l3", c.l3}}; }

json fit_json(const SteinerFit& fit) {
  json j;
  j["h"] = fit.h;
  j["coefficients"] = fit.dimension == 2 ? coeffs_json(fit.coeffs_2d()) : coeffs_json(fit.coeffs_3d());
  j["polynomial"] = fit.coefficients;
  j["residual_rms"] = fit.residual_rms;
  j["eps"] = fit.eps;
  j["volumes"] = fit.volumes;
  return j;
}

std::vector<double> u_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw InputError("--u-step must be positive");
  if (!(lo > 0.0)) throw InputError("--u-min must be positive");
  if (!(hi >= lo)) throw InputError("--u-max must not be below --u-min");
  const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + double(i) * step;
  return out;
}

std::vector<double> parse_levels(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw InputError("bad level '" + item + "'");
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size() || !std::isfinite(v) || v <= 0.0) throw InputError("bad level '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("--levels is empty");
  return out;
}

// ---- coeffs ---------------------------------------------------------------

struct CoeffsArgs {
  std::string geometry;
  bool oracle = false;
  double eps_max = std::numeric_limits<double>::infinity();
  double grid_h = 0.0;
  std::string out;
};

int cmd_coeffs(const CoeffsArgs& a, const Config& cfg, std::ostream& out) {
  const auto g = load(a.geometry);
  Manifest m;
  m.command = "coeffs";
  m.input_sha256 = g.sha256;
  m.parameters["geometry"] = a.geometry;
  m.parameters["oracle"] = a.oracle;
  json report;
  report["dimension"] = g.doc.dimension;

  OracleOptions oo;
  if (a.grid_h > 0.0) oo.h = a.grid_h;
  if (std::isfinite(a.eps_max)) oo.eps_max = a.eps_max;
  oo.max_cells = static_cast<std::size_t>(cfg.max_grid_cells);

  if (g.doc.dimension == 2) {
    const PlanarSet set = validate_set(g.doc.planar);
    json exact = coeffs_json(steiner_coefficients_2d(set));
    exact["euler_characteristic"] = euler_characteristic(set);
    exact["outer_minkowski_content"] = outer_minkowski_content(set);
    exact["concave_angles"] = set.concave_angles();
    json pts = json::array();
    for (const auto& p : set.irregular_points())
      pts.push_back({{"kind", std::string(to_string(p.kind))}, {"x", p.location.x}, {"y", p.location.y}, {"betas", p.betas}});
    exact["irregular_points"] = pts;
    report["exact"] = exact;
    if (a.oracle) {
      oo.cubic = needs_cubic_term(set);
      report["oracle"] = fit_json(oracle_coefficients(set, oo));
      report["oracle"]["cubic_term"] = oo.cubic;
    }
  } else {
    const SteinerCoeffs3D c = polytope_coefficients(g.doc.polytope);
    json exact = coeffs_json(c);
    exact["volume"] = g.doc.polytope.volume;
    exact["surface_area"] = g.doc.polytope.surface_area;
    exact["edges"] = g.doc.polytope.edges.size();
    report["exact"] = exact;
    if (a.oracle) {
      if (g.doc.boxes.empty()) throw InputError("the oracle needs a box-union geometry");
      if (!(a.grid_h > 0.0)) oo.h = cfg.oracle_h_3d;
      report["oracle"] = fit_json(oracle_coefficients(g.doc.boxes, oo));
    }
  }
  if (report.contains("oracle")) m.parameters["oracle_h"] = report["oracle"]["h"];
  report["manifest"] = m.to_json();
  const std::string text = report.dump(2) + "\n";
  if (a.out.empty())
    out << text;
  else
    write_file(a.out + ".json", text);
  return kOk;
}

// ---- expand ---------------------------------------------------------------

struct RangeArgs {
  double u_min = 1.0;
  double u_max = 4.0;
  double u_step = 0.5;
};

struct ExpandArgs {
  std::string geometry;
  RangeArgs range;
  std::string out;
};

int cmd_expand(const ExpandArgs& a, std::ostream& out) {
  const auto us = u_grid(a.range.u_min, a.range.u_max, a.range.u_step);
  const auto g = load(a.geometry);
  Manifest m;
  m.command = "expand";
  m.input_sha256 = g.sha256;
  m.parameters["geometry"] = a.geometry;
  m.parameters["u_min"] = a.range.u_min;
  m.parameters["u_max"] = a.range.u_max;
  m.parameters["u_step"] = a.range.u_step;

  Table t;
  json record;
  std::vector<std::string> names;
  std::function<ExpansionResult(double)> expand;
  if (g.doc.dimension == 2) {
    const auto c = steiner_coefficients_2d(validate_set(g.doc.planar));
    record["coefficients"] = coeffs_json(c);
    names = {"L0", "L1", "sigma2"};
    expand = [c](double u) { return sfh_expansion_2d(c, u); };
  } else {
    const auto c = polytope_coefficients(g.doc.polytope);
    record["coefficients"] = coeffs_json(c);
    names = {"L1", "L2", "L3"};
    expand = [c](double u) { return expansion_3d(c, u); };
  }
  t.columns.push_back("u");
  for (const auto& n : names) t.columns.push_back("term_" + n);
  t.columns.push_back("total");
  for (double u : us) {
    const auto r = expand(u);
    std::vector<std::string> row{format_number(u)};
    for (const auto& n : names) row.push_back(format_number(r.term(n)));
    row.push_back(format_number(r.total));
    t.rows.push_back(std::move(row));
  }
  emit(t, m, record, a.out, out);
  return kOk;
}

// ---- simulate -------------------------------------------------------------

struct SimulateArgs {
  std::string geometry;
  std::string levels;
  RangeArgs range{1.0, 3.0, 0.5};
  std::int64_t replicates = 100000;
  double grid_h = 0.005;
  std::uint64_t seed = 1;
  bool no_diagnostics = false;
  std::string out;
};

int cmd_simulate(const SimulateArgs& a, const Config& cfg, std::ostream& out) {
  const auto levels = a.levels.empty() ? u_grid(a.range.u_min, a.range.u_max, a.range.u_step) : parse_levels(a.levels);
  if (a.replicates <= 0) throw InputError("--replicates must be positive");
  if (!(a.grid_h > 0.0)) throw InputError("--grid-h must be positive");
  const auto g = load(a.geometry);
  if (g.doc.dimension != 2) throw InputError("simulate supports 2D geometry only");
  const PlanarSet set = validate_set(g.doc.planar);
  const auto coeffs = steiner_coefficients_2d(set);

  Manifest m;
  m.command = "simulate";
  m.input_sha256 = g.sha256;
  m.seed = a.seed;
  m.parameters["geometry"] = a.geometry;
  m.parameters["levels"] = levels;
  m.parameters["replicates"] = a.replicates;
  m.parameters["grid_h"] = a.grid_h;
  m.parameters["waves"] = cfg.waves;
  m.parameters["diagnostics"] = !a.no_diagnostics;

  MCOptions mo;
  mo.seed = a.seed;
  mo.replicates = a.replicates;
  mo.grid_h = a.grid_h;
  mo.waves = cfg.waves;
  mo.max_diameter = cfg.max_domain_diameter;
  mo.diagnostics = !a.no_diagnostics;
  const auto main_run = estimate_exceedance(set, levels, mo);

  // Discretization check: half the spacing on a tenth of the replicates.
  MCOptions half = mo;
  half.grid_h = 0.5 * a.grid_h;
  half.replicates = std::max<std::int64_t>(1, a.replicates / 10);
  half.diagnostics = false;
  const auto half_run = estimate_exceedance(set, levels, half);

  Table t;
  t.columns = {"u", "p_hat", "standard_error", "expansion", "ratio", "replicates", "exceedances", "p_hat_half_h",
               "standard_error_half_h", "diagnosed", "a1", "a2", "a3", "a4", "sandwich_checked", "sandwich_failures"};
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const auto& e = main_run[i];
    const double expansion = sfh_expansion_2d(coeffs, levels[i]).total;
    const auto& d = e.diagnostics;
    t.rows.push_back({format_number(levels[i]), format_number(e.p_hat), format_number(e.standard_error),
                      format_number(expansion), format_number(e.p_hat / expansion), std::to_string(e.replicates),
                      std::to_string(e.exceedances), format_number(half_run[i].p_hat),
                      format_number(half_run[i].standard_error), std::to_string(d.diagnosed), std::to_string(d.a1),
                      std::to_string(d.a2), std::to_string(d.a3), std::to_string(d.a4),
                      std::to_string(d.sandwich_checked), std::to_string(d.sandwich_failures)});
  }
  json record;
  record["coefficients"] = coeffs_json(coeffs);
  emit(t, m, record, a.out, out);
  return kOk;
}

// ---- examples -------------------------------------------------------------

EdgeChain polyline(const std::vector<Vec2>& pts, bool closed) {
  EdgeChain out;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) out.push_back(Edge::segment(pts[i], pts[i + 1]));
  if (closed) out.push_back(Edge::segment(pts.back(), pts.front()));
  return out;
}

PlanarSet curve_set(const std::vector<Vec2>& pts, bool closed) {
  SetDescription d;
  d.components.push_back({});
  d.components[0].curve = polyline(pts, closed);
  return validate_set(d);
}

PlanarSet unit_square(std::vector<EdgeChain> whiskers = {}) {
  SetDescription d;
  d.components.push_back({});
  d.components[0].outer = polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true);
  d.components[0].whiskers = std::move(whiskers);
  return validate_set(d);
}

PlanarSet unit_disk() {
  SetDescription d;
  d.components.push_back({});
  d.components[0].outer = {Edge::arc({0, 0}, 1.0, 0.0, kPi, true), Edge::arc({0, 0}, 1.0, kPi, 0.0, true)};
  return validate_set(d);
}

struct ExampleRow {
  std::string example;
  std::string quantity;
  double closed_form = 0.0;
  double exact = kNaN;
  double exact_tol = 0.0;
  bool exact_relative = true;
  double oracle = kNaN;
  double oracle_tol = 0.0;
  bool oracle_relative = true;
};

double deviation(double value, double reference, bool relative) {
  const double d = std::abs(value - reference);
  return relative && reference != 0.0 ? d / std::abs(reference) : d;
}

struct Examples {
  const Config& cfg;
  std::vector<ExampleRow> rows;

  void planar(const std::string& name, const PlanarSet& set, double sigma2, double l1, double l0, double eps_max) {
    const auto c = steiner_coefficients_2d(set);
    OracleOptions oo;
    oo.eps_max = eps_max;
    oo.cubic = needs_cubic_term(set);
    oo.max_cells = static_cast<std::size_t>(cfg.max_grid_cells);
    const auto f = oracle_coefficients(set, oo).coeffs_2d();
    const bool area = sigma2 != 0.0;
    rows.push_back({name, "sigma2", sigma2, c.sigma2, cfg.coeff_rel_tol, true, f.sigma2,
                    area ? cfg.oracle_sigma2_rel : cfg.oracle_sigma2_abs, area});
    rows.push_back({name, "L1", l1, c.l1, cfg.coeff_rel_tol, true, f.l1, cfg.oracle_l1_rel, true});
    rows.push_back({name, "L0", l0, c.l0, cfg.coeff_rel_tol, true, f.l0, cfg.oracle_l0_abs, false});
  }

  void solid(const std::string& name, const std::vector<Box>& boxes, double l1, double l2, double l3,
             double eps_max) {
    const auto c = polytope_coefficients(box_union(boxes));
    OracleOptions oo;
    oo.h = cfg.oracle_h_3d;
    oo.eps_max = eps_max;
    oo.max_cells = static_cast<std::size_t>(cfg.max_grid_cells);
    const auto f = oracle_coefficients(boxes, oo).coeffs_3d();
    rows.push_back({name, "L1", l1, c.l1, cfg.coeff_rel_tol, true, f.l1, cfg.oracle_3d_rel, true});
    rows.push_back({name, "L2", l2, c.l2, cfg.coeff_rel_tol, true, f.l2, cfg.oracle_3d_rel, true});
    rows.push_back({name, "L3", l3, c.l3, cfg.coeff_rel_tol, true, f.l3, cfg.oracle_3d_rel, true});
  }

  void tangent_pair() {
    const double r = 1.0;
    const double closed = 8.0 * std::sqrt(r) * std::tgamma(1.75) / (std::pow(2.0, 0.25) * 3.0 * kPi);
    rows.push_back({"tangent_pair", "coefficient u^-1/2", closed, tangent_pair_coefficient(r), cfg.coeff_rel_tol});

    const double h = 5e-6;
    const auto eps = eps_grid(10.0 * h, 100.0 * h, 8, h);
    const auto areas = tangent_pair_oracle_areas(r, eps, h, static_cast<std::size_t>(cfg.max_grid_cells));
    for (std::size_t i : {std::size_t(0), eps.size() - 1}) {
      const double e = eps[i];
      const double law = 0.5 * kPi * e * e + (8.0 / 3.0) * std::sqrt(r) * std::pow(e, 1.5);
      char q[64];
      std::snprintf(q, sizeof q, "area eps=%g", e);
      rows.push_back({"tangent_pair", q, law, tangent_pair_intersection_area(r, e).exact, cfg.tangent_rel, true,
                      areas[i], cfg.tangent_rel, true});
    }
    const auto c32 = estimate_intersection_constant(eps, areas, 1.5);
    rows.push_back({"tangent_pair", "constant eps^3/2", (8.0 / 3.0) * std::sqrt(r), kNaN, 0.0, true, c32.c,
                    cfg.tangent_rel, true});
    const auto c2 = estimate_intersection_constant(eps, areas, 2.0);
    rows.push_back({"tangent_pair", "mixed-order warning at eps^2", 1.0, kNaN, 0.0, true,
                    c2.mixed_order_warning ? 1.0 : 0.0, 0.0, false});
  }

  void dihedral() {
    for (double alpha : {kPi / 2.0, kPi / 3.0}) {
      const double closed = ((kPi + alpha) / 2.0 + 1.0 / std::tan(alpha / 2.0)) / kPi;
      char q[64];
      std::snprintf(q, sizeof q, "constant alpha=%.6g", alpha);
      rows.push_back({"dihedral", q, closed, dihedral_subtraction_constant(alpha), cfg.coeff_rel_tol});
    }
  }
};

double angle_l0(std::initializer_list<double> betas) {
  double s = 1.0;
  for (double b : betas) s += (b / 2.0 - std::tan(b / 2.0)) / kPi;
  return s;
}

int cmd_examples(const std::string& out_path, const Config& cfg, std::ostream& out, std::ostream& err) {
  Manifest m;
  m.command = "examples";
  Examples ex{cfg, {}};
  const double s3 = std::sqrt(3.0) / 2.0;
  ex.planar("angle", curve_set({{1, 0}, {0, 0}, {0, 1}}, false), 0.0, 4.0, angle_l0({kPi / 2.0}), 0.45);
  ex.planar("multi_angle", curve_set({{0, 0}, {1, 0}, {1, 1}, {1 + s3, 1.5}}, false), 0.0, 6.0,
            angle_l0({kPi / 2.0, kPi / 3.0}), 0.4);
  ex.planar("empty_square", curve_set({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, true), 0.0, 8.0, (kPi - 4.0) / kPi, 0.45);
  ex.planar("whiskered_square",
            unit_square({polyline({{0, 0.5}, {-0.5, 0.5}}, false), polyline({{1, 0.5}, {1.5, 0.5}}, false)}), 1.0,
            6.0, (2.0 * kPi - 4.0) / kPi, 0.45);
  const double inf = std::numeric_limits<double>::infinity();
  ex.planar("convex_square", unit_square(), 1.0, 4.0, 1.0, inf);
  ex.planar("convex_disk", unit_disk(), kPi, 2.0 * kPi, 1.0, inf);
  ex.tangent_pair();
  ex.dihedral();
  ex.solid("l_shape", {{{0, 0, 0}, {1, 1, 1}}, {{1, 0, 0}, {2, 1, 1}}, {{0, 1, 0}, {1, 2, 1}}}, 21.0 / 4.0 - 1.0 / kPi,
           7.0, 3.0, 0.9);
  ex.solid("cube", {{{0, 0, 0}, {1, 1, 1}}}, 3.0, 3.0, 1.0, 1.0);
  ex.solid("box_1x1x2", {{{0, 0, 0}, {1, 1, 2}}}, 4.0, 5.0, 2.0, 1.0);

  Table t;
  t.columns = {"example", "quantity", "closed_form", "exact", "oracle", "exact_error", "oracle_error",
               "exact_tolerance", "oracle_tolerance", "status"};
  auto num = [](double x) { return std::isnan(x) ? std::string() : format_number(x); };
  std::vector<std::string> failures;
  for (const auto& r : ex.rows) {
    const double ee = std::isnan(r.exact) ? kNaN : deviation(r.exact, r.closed_form, r.exact_relative);
    const double oe = std::isnan(r.oracle) ? kNaN : deviation(r.oracle, r.closed_form, r.oracle_relative);
    const bool ok = !(ee > r.exact_tol) && !(oe > r.oracle_tol);
    t.rows.push_back({r.example, r.quantity, num(r.closed_form), num(r.exact), num(r.oracle), num(ee), num(oe),
                      std::isnan(r.exact) ? "" : num(r.exact_tol), std::isnan(r.oracle) ? "" : num(r.oracle_tol),
                      ok ? "PASS" : "FAIL"});
    if (!ok) failures.push_back(r.example + " " + r.quantity);
  }
  emit(t, m, json::object(), out_path, out);
  if (!failures.empty()) {
    err << "examples: " << failures.size() << " row(s) out of tolerance:\n";
    for (const auto& f : failures) err << "  " << f << "\n";
    return kAcceptanceFailure;
  }
  return kOk;
}

}  // namespace

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  Config c;
  const std::vector<std::pair<const char*, double*>> reals{
      {"coeff_rel_tol", &c.coeff_rel_tol},         {"oracle_sigma2_rel", &c.oracle_sigma2_rel},
      {"oracle_sigma2_abs", &c.oracle_sigma2_abs}, {"oracle_l1_rel", &c.oracle_l1_rel},
      {"oracle_l0_abs", &c.oracle_l0_abs},         {"oracle_3d_rel", &c.oracle_3d_rel},
      {"tangent_rel", &c.tangent_rel},             {"max_domain_diameter", &c.max_domain_diameter},
      {"max_grid_cells", &c.max_grid_cells},       {"oracle_h_3d", &c.oracle_h_3d}};
  for (const auto& [key, value] : doc.items()) {
    if (key == "waves") {
      if (!value.is_number_integer() || value.get<int>() < 5) throw ConfigError("\"waves\" must be an integer >= 5");
      c.waves = value.get<int>();
      continue;
    }
    double* slot = nullptr;
    for (const auto& [name, p] : reals)
      if (key == name) slot = p;
    if (!slot) throw ConfigError("unknown config key \"" + key + "\"");
    if (!value.is_number() || !(value.get<double>() > 0.0) || !std::isfinite(value.get<double>()))
      throw ConfigError("config key \"" + key + "\" must be a positive number");
    *slot = value.get<double>();
  }
  return c;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"gausstail: tail of the maximum of a smooth Gaussian field over a planar or polyhedral set"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file overriding tolerances and limits");

  CoeffsArgs ca;
  auto* coeffs = app.add_subcommand("coeffs", "exact Steiner coefficients (optionally with the tube oracle)");
  coeffs->add_option("--geometry", ca.geometry, "geometry JSON file")->required();
  coeffs->add_flag("--oracle", ca.oracle, "fit coefficients from grid tube volumes");
  coeffs->add_option("--eps-max", ca.eps_max, "largest tube radius used by the oracle fit");
  coeffs->add_option("--grid-h", ca.grid_h, "oracle grid spacing (default: from the set diameter)");
  coeffs->add_option("--out", ca.out, "write PATH.json instead of printing");

  ExpandArgs ea;
  auto* expand = app.add_subcommand("expand", "tail expansion on a grid of levels");
  expand->add_option("--geometry", ea.geometry, "geometry JSON file")->required();
  expand->add_option("--u-min", ea.range.u_min);
  expand->add_option("--u-max", ea.range.u_max);
  expand->add_option("--u-step", ea.range.u_step);
  expand->add_option("--out", ea.out, "write PATH.csv and PATH.json");

  SimulateArgs sa;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo exceedance with a random-wave field");
  simulate->add_option("--geometry", sa.geometry, "geometry JSON file")->required();
  simulate->add_option("--levels", sa.levels, "comma-separated levels, e.g. \"1.5,2,2.5\"");
  simulate->add_option("--u-min", sa.range.u_min);
  simulate->add_option("--u-max", sa.range.u_max);
  simulate->add_option("--u-step", sa.range.u_step);
  simulate->add_option("--replicates", sa.replicates);
  simulate->add_option("--grid-h", sa.grid_h, "discretization step along the set");
  simulate->add_option("--seed", sa.seed);
  simulate->add_flag("--no-diagnostics", sa.no_diagnostics, "skip the excursion-shape diagnostics");
  simulate->add_option("--out", sa.out, "write PATH.csv and PATH.json");

  std::string xo;
  auto* examples = app.add_subcommand("examples", "closed-form examples against the oracle");
  examples->add_option("--out", xo, "write PATH.csv and PATH.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    out << kVersion << "\n";
    return kOk;
  } catch (const CLI::Success&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "gausstail: " << e.what() << "\n";
    return kInputError;
  }

  try {
    const Config cfg = config_path.empty() ? Config{} : load_config(config_path);
    if (*coeffs) return cmd_coeffs(ca, cfg, out);
    if (*expand) return cmd_expand(ea, out);
    if (*simulate) return cmd_simulate(sa, cfg, out);
    if (*examples) return cmd_examples(xo, cfg, out, err);
    return kInputError;
  } catch (const ConfigError& e) {
    err << "gausstail: configuration error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DomainError& e) {
    err << "gausstail: " << e.what() << "\n";
    return kConfigError;
  } catch (const OracleError& e) {
    err << "gausstail: oracle: " << e.what() << "\n";
    return kConfigError;
  } catch (const GeometryError& e) {
    err << "gausstail: invalid geometry: " << e.what() << "\n";
    return kInputError;
  } catch (const InputError& e) {
    err << "gausstail: " << e.what() << "\n";
    return kInputError;
  } catch (const std::invalid_argument& e) {
    err << "gausstail: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "gausstail: internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace gausstail::cli
