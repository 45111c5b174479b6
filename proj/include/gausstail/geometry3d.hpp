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

// Steiner-type coefficients of 3D polytopes and the exact summary of unions of
// axis-aligned boxes.

#pragma once

#include <array>
#include <vector>

#include "gausstail/geometry2d.hpp"

namespace gausstail {

struct PolytopeEdge {
  double length = 0.0;
  // Internal dihedral angle in (0, 2pi); above pi the edge is concave.
  double dihedral = 0.0;

  bool concave() const { return dihedral > std::numbers::pi; }
};

struct PolytopeSummary {
  double volume = 0.0;
  double surface_area = 0.0;
  std::vector<PolytopeEdge> edges;
};

struct SteinerCoeffs3D {
  double l1 = 0.0;
  double l2 = 0.0;  // half the surface area
  double l3 = 0.0;  // volume
  Provenance provenance = Provenance::exact;
};

// L1 sums (pi - alpha) l / (2pi) over convex edges and cot(beta/2) l / pi over
// concave ones, where beta is the internal dihedral of the concave edge.
SteinerCoeffs3D polytope_coefficients(const PolytopeSummary& polytope);

struct Box {
  std::array<double, 3> min{};
  std::array<double, 3> max{};
};

double box_distance(const Box& box, const std::array<double, 3>& p);

// Exact volume, surface area and edge list of a union of boxes with disjoint
// interiors. Collinear elementary edges of the same kind are merged.
PolytopeSummary box_union(const std::vector<Box>& boxes);

// ((pi + alpha)/2 + cot(alpha/2)) / pi for alpha in (0, pi).
double dihedral_subtraction_constant(double alpha);

}  // namespace gausstail
