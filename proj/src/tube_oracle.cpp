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

#include "gausstail/tube_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <memory>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "gausstail/parallel.hpp"
#include "json.hpp"

namespace gausstail {
namespace {

constexpr std::size_t kChunk = 1 << 16;

std::size_t chunk_count(std::size_t n) { return (n + kChunk - 1) / kChunk; }

// counts[k] = number of values v with v <= eps[k]; eps sorted ascending.
std::vector<std::size_t> count_below(std::size_t n, const std::function<float(std::size_t)>& value,
                                     const std::vector<double>& eps) {
  if (!std::is_sorted(eps.begin(), eps.end())) throw OracleError("eps values must be ascending");
  const std::size_t chunks = chunk_count(n);
  std::vector<std::vector<std::size_t>> hist(chunks, std::vector<std::size_t>(eps.size() + 1, 0));
  parallel_for(chunks, [&](std::size_t c) {
    auto& hc = hist[c];
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      const double v = value(i);
      hc[std::size_t(std::lower_bound(eps.begin(), eps.end(), v) - eps.begin())]++;
    }
  });
  std::vector<std::size_t> counts(eps.size(), 0);
  std::size_t running = 0;
  for (std::size_t k = 0; k < eps.size(); ++k) {
    for (const auto& hc : hist) running += hc[k];
    counts[k] = running;
  }
  return counts;
}

void check_eps(const GridField& f, const std::vector<double>& eps) {
  for (double e : eps) {
    if (!(e >= 0.0)) throw OracleError("eps must be non-negative");
    if (e > f.margin * (1.0 + 1e-12)) throw OracleError("eps " + std::to_string(e) + " exceeds the grid margin");
  }
}

}  // namespace

double GridSpec::cell_volume() const { return std::pow(h, dimension); }

OracleGeometry oracle_geometry(const PlanarSet& set) {
  const auto [lo, hi] = set.bounding_box();
  OracleGeometry g;
  g.dimension = 2;
  g.lo = {lo.x, lo.y, 0.0};
  g.hi = {hi.x, hi.y, 0.0};
  g.distance = [owned = std::make_shared<const PlanarSet>(set)](const Point3& p) {
    return owned->distance({p[0], p[1]});
  };
  return g;
}

OracleGeometry oracle_geometry(const std::vector<Box>& boxes) {
  if (boxes.empty()) throw OracleError("no boxes");
  OracleGeometry g;
  g.dimension = 3;
  g.lo = boxes[0].min;
  g.hi = boxes[0].max;
  for (const auto& b : boxes)
    for (int a = 0; a < 3; ++a) {
      g.lo[a] = std::min(g.lo[a], b.min[a]);
      g.hi[a] = std::max(g.hi[a], b.max[a]);
    }
  g.distance = [boxes](const Point3& p) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& b : boxes) best = std::min(best, box_distance(b, p));
    return best;
  };
  return g;
}

GridSpec make_grid(int dimension, const Point3& lo, const Point3& hi, double margin, double h) {
  if (!(h > 0.0)) throw OracleError("grid spacing must be positive");
  if (dimension != 2 && dimension != 3) throw OracleError("grid dimension must be 2 or 3");
  GridSpec g;
  g.dimension = dimension;
  g.h = h;
  for (int a = 0; a < dimension; ++a) {
    const double start = std::floor((lo[a] - margin) / h - 1e-9);
    const double stop = std::ceil((hi[a] + margin) / h + 1e-9);
    g.origin[a] = start * h;
    g.dims[a] = std::size_t(stop - start);
  }
  return g;
}

GridField distance_field(const OracleGeometry& geometry, const GridSpec& grid, double margin,
                         std::size_t max_cells) {
  if (geometry.dimension != grid.dimension) throw OracleError("geometry and grid dimensions differ");
  if (grid.cells() > max_cells)
    throw OracleError("grid of " + std::to_string(grid.cells()) + " cells exceeds the budget of " +
                      std::to_string(max_cells));
  GridField f;
  f.grid = grid;
  f.margin = margin;
  f.values.resize(grid.cells());
  const std::size_t rows = grid.dims[0] * grid.dims[1];
  const std::size_t nz = grid.dims[2];
  // Row-major with x slowest: index = (i * ny + j) * nz + k.
  parallel_for(chunk_count(rows * nz), [&](std::size_t c) {
    const std::size_t end = std::min(rows * nz, (c + 1) * kChunk);
    for (std::size_t idx = c * kChunk; idx < end; ++idx) {
      const std::size_t k = idx % nz;
      const std::size_t j = (idx / nz) % grid.dims[1];
      const std::size_t i = idx / (nz * grid.dims[1]);
      Point3 p{grid.origin[0] + (double(i) + 0.5) * grid.h, grid.origin[1] + (double(j) + 0.5) * grid.h, 0.0};
      if (grid.dimension == 3) p[2] = grid.origin[2] + (double(k) + 0.5) * grid.h;
      f.values[idx] = float(geometry.distance(p));
    }
  });
  return f;
}

GridField distance_field(const OracleGeometry& geometry, double margin, double h, std::size_t max_cells) {
  return distance_field(geometry, make_grid(geometry.dimension, geometry.lo, geometry.hi, margin, h), margin,
                        max_cells);
}

void write_grid_field(const GridField& field, const std::filesystem::path& stem) {
  std::filesystem::path raw = stem;
  raw += ".f32";
  std::ofstream out(raw, std::ios::binary);
  if (!out) throw OracleError("cannot write " + raw.string());
  for (float v : field.values) {
    unsigned char bytes[4];
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    for (int b = 0; b < 4; ++b) bytes[b] = (bits >> (8 * b)) & 0xff;
    out.write(reinterpret_cast<const char*>(bytes), 4);
  }
  nlohmann::json side;
  side["origin"] = std::vector<double>(field.grid.origin.begin(), field.grid.origin.begin() + field.grid.dimension);
  side["h"] = field.grid.h;
  side["dims"] = std::vector<std::size_t>(field.grid.dims.begin(), field.grid.dims.begin() + field.grid.dimension);
  std::filesystem::path meta = stem;
  meta += ".json";
  std::ofstream(meta) << side.dump(2) << '\n';
}

std::vector<double> tube_volumes(const GridField& field, const std::vector<double>& eps) {
  check_eps(field, eps);
  const auto counts = count_below(field.values.size(), [&](std::size_t i) { return field.values[i]; }, eps);
  std::vector<double> out;
  for (std::size_t c : counts) out.push_back(double(c) * field.grid.cell_volume());
  return out;
}

double tube_volume(const GridField& field, double eps) { return tube_volumes(field, {eps})[0]; }

std::vector<double> intersection_tube_volumes(const std::vector<const GridField*>& fields,
                                              const std::vector<double>& eps) {
  if (fields.empty()) throw OracleError("no fields to intersect");
  for (const auto* f : fields) {
    if (!(f->grid == fields[0]->grid)) throw OracleError("intersection needs fields on a shared grid");
    check_eps(*f, eps);
  }
  const auto counts = count_below(
      fields[0]->values.size(),
      [&](std::size_t i) {
        float v = 0.0f;
        for (const auto* f : fields) v = std::max(v, f->values[i]);
        return v;
      },
      eps);
  std::vector<double> out;
  for (std::size_t c : counts) out.push_back(double(c) * fields[0]->grid.cell_volume());
  return out;
}

double intersection_tube_volume(const std::vector<const GridField*>& fields, double eps) {
  return intersection_tube_volumes(fields, {eps})[0];
}

std::vector<double> eps_grid(double lo, double hi, int count, double h) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw OracleError("invalid eps range");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    double e = lo * std::pow(hi / lo, double(i) / (count - 1));
    if (h > 0.0) e = std::max(1.0, std::round(e / h)) * h;
    if (out.empty() || e > out.back() * (1.0 + 1e-12)) out.push_back(e);
  }
  return out;
}

SteinerFit fit_steiner(const std::vector<double>& eps, const std::vector<double>& volumes, int dimension, double h,
                       const FitOptions& options) {
  if (dimension != 2 && dimension != 3) throw OracleError("fit dimension must be 2 or 3");
  if (eps.size() != volumes.size()) throw OracleError("eps and volume lists differ in length");
  if (eps.size() < 8) throw OracleError("fit needs at least 8 eps values");
  const auto [mn, mx] = std::minmax_element(eps.begin(), eps.end());
  if (*mx < 10.0 * *mn * (1.0 - 1e-9)) throw OracleError("ill-conditioned fit: eps range spans less than a decade");
  if (*mn < 5.0 * h) throw OracleError("ill-conditioned fit: smallest eps is within 5 grid cells");

  const int degree = (dimension == 3 || options.cubic) ? 3 : 2;
  const int first = options.pinned_constant ? 1 : 0;
  const int cols = degree + 1 - first;
  const Eigen::Index rows = Eigen::Index(eps.size());
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double e = eps[std::size_t(i)];
    const double w = 1.0 / e;
    // Columns scaled by powers of the largest eps for conditioning.
    for (int c = 0; c < cols; ++c) a(i, c) = w * std::pow(e / *mx, first + c);
    b(i) = w * (volumes[std::size_t(i)] - options.pinned_constant.value_or(0.0));
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);

  SteinerFit fit;
  fit.dimension = dimension;
  fit.eps = eps;
  fit.h = h;
  fit.volumes = volumes;
  fit.coefficients.assign(std::size_t(degree + 1), 0.0);
  if (options.pinned_constant) fit.coefficients[0] = *options.pinned_constant;
  for (int c = 0; c < cols; ++c) fit.coefficients[std::size_t(first + c)] = x(c) / std::pow(*mx, first + c);
  double ss = 0.0;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    double model = 0.0;
    for (std::size_t p = 0; p < fit.coefficients.size(); ++p) model += fit.coefficients[p] * std::pow(eps[i], double(p));
    ss += (volumes[i] - model) * (volumes[i] - model);
  }
  fit.residual_rms = std::sqrt(ss / double(eps.size()));
  return fit;
}

SteinerFit fit_steiner(const GridField& field, const std::vector<double>& eps, int dimension,
                       const FitOptions& options) {
  if (dimension != field.grid.dimension) throw OracleError("fit dimension differs from the grid");
  return fit_steiner(eps, tube_volumes(field, eps), dimension, field.grid.h, options);
}

SteinerCoeffs2D SteinerFit::coeffs_2d() const {
  return {coefficients.at(0), coefficients.at(1), coefficients.at(2) / std::numbers::pi, Provenance::fitted};
}

SteinerCoeffs3D SteinerFit::coeffs_3d() const {
  return {coefficients.at(2) / std::numbers::pi, 0.5 * coefficients.at(1), coefficients.at(0), Provenance::fitted};
}

IntersectionConstant estimate_intersection_constant(const std::vector<double>& eps,
                                                    const std::vector<double>& volumes, double exponent,
                                                    double tolerance) {
  if (eps.size() != volumes.size() || eps.size() < 3) throw OracleError("need at least 3 (eps, volume) pairs");
  const std::size_t n = eps.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(eps[i] > 0.0) || !(volumes[i] > 0.0)) throw OracleError("eps and volumes must be positive");
    const double ratio = volumes[i] / std::pow(eps[i], exponent);
    mean += ratio;
    const double x = std::log(eps[i]);
    const double y = std::log(ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = double(n) * sxx - sx * sx;
  if (denom <= 0.0) throw OracleError("eps values must not all coincide");
  IntersectionConstant out;
  out.c = mean / double(n);
  out.trend = (double(n) * sxy - sx * sy) / denom;
  out.mixed_order_warning = std::abs(out.trend) > tolerance;
  return out;
}

double default_grid_spacing(double diameter, int dimension) {
  if (!(diameter > 0.0)) throw OracleError("set diameter must be positive");
  const double target = (dimension == 3 ? 1e-2 : 2e-3) * diameter;
  return 1.0 / (2.0 * std::ceil(0.5 / target));
}

namespace {

// The same set seen through a lattice rotated by `angle` about the centre of
// its bounding box.
OracleGeometry rotated(const OracleGeometry& g, double angle) {
  const double cx = 0.5 * (g.lo[0] + g.hi[0]);
  const double cy = 0.5 * (g.lo[1] + g.hi[1]);
  const double r = 0.5 * std::hypot(g.hi[0] - g.lo[0], g.hi[1] - g.lo[1]);
  OracleGeometry out = g;
  out.lo = {cx - r, cy - r, 0.0};
  out.hi = {cx + r, cy + r, 0.0};
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  out.distance = [inner = g.distance, cx, cy, c, s](const Point3& p) {
    const double x = p[0] - cx;
    const double y = p[1] - cy;
    return inner({cx + c * x - s * y, cy + s * x + c * y, 0.0});
  };
  return out;
}

SteinerFit run_oracle(const OracleGeometry& base, const OracleOptions& options) {
  const OracleGeometry g =
      base.dimension == 2 && options.lattice_rotation != 0.0 ? rotated(base, options.lattice_rotation) : base;
  double diameter = 0.0;
  for (int a = 0; a < base.dimension; ++a) diameter += (base.hi[a] - base.lo[a]) * (base.hi[a] - base.lo[a]);
  diameter = std::sqrt(diameter);
  if (diameter <= 0.0) diameter = 1.0;  // a single point
  const double h = options.h > 0.0 ? options.h : default_grid_spacing(diameter, g.dimension);
  const double hi = std::floor(std::min(200.0 * h, options.eps_max) / h + 1e-9) * h;
  const double lo = std::min(20.0 * h, std::floor(hi / (10.0 * h) + 1e-9) * h);
  if (lo < 5.0 * h)
    throw OracleError("eps range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                      "] is too narrow for grid spacing " + std::to_string(h));
  const auto eps = eps_grid(lo, hi, options.eps_count, h);
  const auto field = distance_field(g, eps.back() + 2.0 * h, h, options.max_cells);
  FitOptions fo;
  fo.cubic = options.cubic;
  return fit_steiner(field, eps, g.dimension, fo);
}

}  // namespace

std::vector<double> tangent_pair_oracle_areas(double radius, const std::vector<double>& eps, double h,
                                              std::size_t max_cells) {
  if (eps.empty()) throw OracleError("no eps values");
  const double top = *std::max_element(eps.begin(), eps.end());
  if (!(top < radius)) throw OracleError("tangent pair oracle needs eps < R");
  SetDescription arc_desc, seg_desc;
  arc_desc.components.push_back({});
  arc_desc.components[0].curve = {Edge::arc({0.0, radius}, radius, -0.5 * std::numbers::pi, 0.0, true)};
  seg_desc.components.push_back({});
  seg_desc.components[0].curve = {Edge::segment({0.0, 0.0}, {3.0 * radius, 0.0})};
  const PlanarSet arc = validate_set(arc_desc);
  const PlanarSet seg = validate_set(seg_desc);
  // The intersection lies in |y| <= eps and -eps <= x <= 2 sqrt(R eps).
  const GridSpec grid =
      make_grid(2, {-1.1 * top, -1.1 * top, 0.0}, {2.2 * std::sqrt(radius * top), 1.1 * top, 0.0}, 0.0, h);
  const GridField fa = distance_field(oracle_geometry(arc), grid, top, max_cells);
  const GridField fs = distance_field(oracle_geometry(seg), grid, top, max_cells);
  return intersection_tube_volumes({&fa, &fs}, eps);
}

bool needs_cubic_term(const PlanarSet& set) {
  if (set.concave_angles().empty()) return false;
  auto curved = [](const EdgeChain& chain) {
    return std::any_of(chain.begin(), chain.end(), [](const Edge& e) { return e.is_arc(); });
  };
  for (const auto& c : set.components()) {
    if (curved(c.outer) || curved(c.curve)) return true;
    for (const auto& h : c.holes)
      if (curved(h)) return true;
    for (const auto& w : c.whiskers)
      if (curved(w)) return true;
  }
  return false;
}

SteinerFit oracle_coefficients(const PlanarSet& set, const OracleOptions& options) {
  return run_oracle(oracle_geometry(set), options);
}

SteinerFit oracle_coefficients(const std::vector<Box>& boxes, const OracleOptions& options) {
  return run_oracle(oracle_geometry(boxes), options);
}

}  // namespace gausstail
