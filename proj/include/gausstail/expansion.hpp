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

// Tail expansions for the maximum of a unit-variance Gaussian field, the
// Euler-characteristic density, and the polygon upper bound.

#pragma once

#include <string>
#include <vector>

#include "gausstail/geometry2d.hpp"
#include "gausstail/geometry3d.hpp"

namespace gausstail {

struct GaussianKernels {
  double tail = 0.0;     // upper tail of the standard normal
  double density = 0.0;  // standard normal density
};

GaussianKernels gaussian_kernels(double u);
double normal_tail(double u);
double normal_density(double u);
double gamma_function(double x);

struct ExpansionTerm {
  std::string name;   // coefficient name, e.g. "L0"
  std::string basis;  // "tail", "phi", "u*phi", "(u^2-1)*phi", "u^-1/2*phi"
  double coefficient = 0.0;
  double basis_value = 0.0;
  double value = 0.0;
};

struct ExpansionResult {
  double u = 0.0;
  std::vector<ExpansionTerm> terms;
  double total = 0.0;

  // Value of the named term, 0 when absent.
  double term(const std::string& name) const;
};

ExpansionResult sfh_expansion_2d(const SteinerCoeffs2D& c, double u);
// No tail term: its coefficient is not determined for non-locally-convex solids.
ExpansionResult expansion_3d(const SteinerCoeffs3D& c, double u);

// Leading term u^(d-1) phi(u) C Gamma(1 + (n-d)/2) / (2^(d/2) pi^(n/2)) of the
// joint exceedance of m sets whose tube intersection has area C eps^(n-d).
double joint_exceedance_asymptotic(double c, double d, int n, double u);

// Segment of length len2 tangent to a circular arc of radius R and length len1.
double tangent_pair_coefficient(double radius);
ExpansionResult tangent_pair_expansion(double radius, double len1, double len2, double u);

double euler_density_2d(double chi, double sigma1, double sigma2, double x);
double polygon_upper_bound(double sigma1, double sigma2, double c, double u);

// Two planar pieces meeting along a shared edge of length `shared` at dihedral
// angle alpha.
ExpansionResult dihedral_expansion(double area1, double area2, double perimeter1, double perimeter2,
                                   double shared, double alpha, double u);

}  // namespace gausstail
