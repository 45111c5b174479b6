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

// Brute-force tube volumes on a regular grid of exact point-to-set distances,
// and least-squares extraction of Steiner coefficients from them. This is the
// independent check on the closed-form coefficients.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gausstail/geometry2d.hpp"
#include "gausstail/geometry3d.hpp"

namespace gausstail {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Point3 = std::array<double, 3>;

// A set known only through its distance function and a bounding box. In 2D
// the third coordinate is ignored.
struct OracleGeometry {
  int dimension = 2;
  Point3 lo{};
  Point3 hi{};
  std::function<double(const Point3&)> distance;
};

OracleGeometry oracle_geometry(const PlanarSet& set);
OracleGeometry oracle_geometry(const std::vector<Box>& boxes);

// Cell centers sit at origin + (i + 1/2) h along each used axis.
struct GridSpec {
  int dimension = 2;
  Point3 origin{};
  double h = 0.0;
  std::array<std::size_t, 3> dims{1, 1, 1};

  std::size_t cells() const { return dims[0] * dims[1] * dims[2]; }
  double cell_volume() const;
  bool operator==(const GridSpec&) const = default;
};

// Grid covering [lo - margin, hi + margin], origin snapped to a multiple of h
// so that box faces at multiples of h fall on cell boundaries.
GridSpec make_grid(int dimension, const Point3& lo, const Point3& hi, double margin, double h);

inline constexpr std::size_t kDefaultMaxCells = 300'000'000;

struct GridField {
  GridSpec grid;
  // Largest eps whose tube is known to fit in the grid.
  double margin = 0.0;
  std::vector<float> values;
};

GridField distance_field(const OracleGeometry& geometry, const GridSpec& grid, double margin,
                         std::size_t max_cells = kDefaultMaxCells);
GridField distance_field(const OracleGeometry& geometry, double margin, double h,
                         std::size_t max_cells = kDefaultMaxCells);

// Raw little-endian float32 values plus a JSON sidecar {origin, h, dims}.
void write_grid_field(const GridField& field, const std::filesystem::path& stem);

double tube_volume(const GridField& field, double eps);
std::vector<double> tube_volumes(const GridField& field, const std::vector<double>& eps);
double intersection_tube_volume(const std::vector<const GridField*>& fields, double eps);
std::vector<double> intersection_tube_volumes(const std::vector<const GridField*>& fields,
                                              const std::vector<double>& eps);

// `count` geometric steps from lo to hi, each rounded to a multiple of h.
std::vector<double> eps_grid(double lo, double hi, int count, double h);

struct FitOptions {
  std::optional<double> pinned_constant;
  // Adds an eps^3 column in 2D (always present in 3D) to absorb curvature
  // interactions that are not polynomial in eps.
  bool cubic = false;
};

struct SteinerFit {
  int dimension = 2;
  // Polynomial coefficients of the tube volume, constant term first.
  std::vector<double> coefficients;
  double residual_rms = 0.0;
  double h = 0.0;
  std::vector<double> eps;
  std::vector<double> volumes;

  SteinerCoeffs2D coeffs_2d() const;
  SteinerCoeffs3D coeffs_3d() const;
};

SteinerFit fit_steiner(const std::vector<double>& eps, const std::vector<double>& volumes, int dimension,
                       double h, const FitOptions& options = {});
SteinerFit fit_steiner(const GridField& field, const std::vector<double>& eps, int dimension,
                       const FitOptions& options = {});

struct IntersectionConstant {
  double c = 0.0;
  // Slope of log(volume / eps^exponent) against log(eps); 0 for a pure power.
  double trend = 0.0;
  bool mixed_order_warning = false;
};

IntersectionConstant estimate_intersection_constant(const std::vector<double>& eps,
                                                    const std::vector<double>& volumes, double exponent,
                                                    double tolerance = 0.05);

// Largest 1/(2m) not above fraction * diameter (2e-3 in 2D, 1e-2 in 3D).
double default_grid_spacing(double diameter, int dimension);

struct OracleOptions {
  double h = 0.0;  // 0 selects default_grid_spacing
  // Upper limit of eps for which the tube volume is polynomial.
  double eps_max = std::numeric_limits<double>::infinity();
  int eps_count = 12;
  bool cubic = false;
  // 2D only: sample on a lattice rotated by this angle (radians) so that
  // straight edges do not resonate with the grid rows.
  double lattice_rotation = 0.3;
  std::size_t max_cells = kDefaultMaxCells;
};

// Tube-intersection areas of a quarter circle of radius R and a segment of
// length 3R tangent to it at their common endpoint, measured on a window
// around the tangency point.
std::vector<double> tangent_pair_oracle_areas(double radius, const std::vector<double>& eps, double h,
                                              std::size_t max_cells = kDefaultMaxCells);

// True when a concave vertex and curved edges coexist, where the tube volume
// picks up terms that are not polynomial in eps.
bool needs_cubic_term(const PlanarSet& set);

// Default eps range [min(20h, hi/10), hi] with hi = min(200h, eps_max).
SteinerFit oracle_coefficients(const PlanarSet& set, const OracleOptions& options = {});
SteinerFit oracle_coefficients(const std::vector<Box>& boxes, const OracleOptions& options = {});

}  // namespace gausstail
