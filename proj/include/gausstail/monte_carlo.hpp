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

// Crude Monte Carlo for the maximum of the random-wave field over discretized
// planar sets, with grid-level excursion diagnostics.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gausstail/field_sim.hpp"
#include "gausstail/geometry2d.hpp"

namespace gausstail {

// The set does not fit the domain on which the field's covariance is close to
// its isotropic limit.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Ball {
  Vec2 center;
  double radius = 0.0;
};

struct DiagnosticOptions {
  double alpha = 0.4;
  double beta = 0.4;
  double grid_h = 0.02;
  // Added to the radius of the set's bounding ball.
  double margin = 0.25;
  // Diagnose at most this many exceeding replicates per level, lowest
  // replicate indices first.
  std::int64_t max_replicates = 2000;
};

struct DiagnosticRecord {
  int maxima_above = 0;  // grid local maxima with value >= u
  bool a1 = false;       // a local maximum >= u + 1
  bool a2 = false;       // two or more interior local maxima >= u
  bool a3 = false;       // directional curvature <= -X(t) - u^alpha near a maximum
  bool a4 = false;       // directional curvature >= -X(t) + u^alpha near a maximum
  bool sandwich_checked = false;
  bool sandwich_ok = false;
  Vec2 location;
  double max_value = 0.0;
  double r_lower = 0.0;
  double r_upper = 0.0;
};

struct DiagnosticCounts {
  std::int64_t diagnosed = 0;
  std::int64_t a1 = 0;
  std::int64_t a2 = 0;
  std::int64_t a3 = 0;
  std::int64_t a4 = 0;
  std::int64_t sandwich_checked = 0;
  std::int64_t sandwich_failures = 0;
};

struct MCEstimate {
  double u = 0.0;
  double p_hat = 0.0;
  std::int64_t replicates = 0;
  std::int64_t exceedances = 0;
  double standard_error = 0.0;
  double grid_h = 0.0;
  DiagnosticCounts diagnostics;
};

struct MCOptions {
  std::uint64_t seed = 1;
  std::int64_t replicates = 100000;
  double grid_h = 0.005;      // arc-length step on curves and boundaries
  double interior_h = 0.0;    // 0 means 2 * grid_h
  int waves = kDefaultWaves;
  double max_diameter = 4.0;
  std::size_t batch = 512;    // replicates per task; fixed so results ignore thread count
  std::size_t workers = 0;    // 0 = worker_count()
  bool diagnostics = false;
  DiagnosticOptions diagnostic;
};

// Boundary, whisker and curve points every grid_h of arc length, plus the
// interior lattice of spacing interior_h.
std::vector<Vec2> discretize(const PlanarSet& set, double grid_h, double interior_h);

// Ball centred on the bounding-box centre that contains the set.
Ball bounding_ball(const PlanarSet& set);

// (r_lower, r_upper) of the ball sandwich around a maximum of height x >= u.
std::pair<double, double> sandwich_radii(double x, double u, double alpha);

// Lattice on a ball with its basis precomputed, reused across replicates.
class DiagnosticGrid {
 public:
  DiagnosticGrid(const Ball& ball, double h, int waves);

  std::size_t size() const noexcept { return points_.size(); }
  DiagnosticRecord run(const RandomWaveField& field, double u, const DiagnosticOptions& options) const;

 private:
  Ball ball_;
  double h_;
  int waves_;
  int half_;                    // lattice index range [-half_, half_]
  std::vector<int> index_;      // lattice slot -> point index or -1
  std::vector<Vec2> points_;
  std::vector<int> slot_;       // point index -> lattice slot
  std::vector<double> basis_;   // points x 2K, row-major
};

DiagnosticRecord excursion_diagnostics(const RandomWaveField& field, const Ball& ball, double u,
                                       const DiagnosticOptions& options);

std::vector<MCEstimate> estimate_exceedance(const PlanarSet& set, const std::vector<double>& levels,
                                            const MCOptions& options);

// Fraction of replicates in which every set's maximum reaches u.
std::vector<MCEstimate> estimate_joint_exceedance(const std::vector<const PlanarSet*>& sets,
                                                  const std::vector<double>& levels, const MCOptions& options);

}  // namespace gausstail
