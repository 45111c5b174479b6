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

#include "gausstail/expansion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gausstail {
namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2.0 * kPi);

ExpansionResult finish(double u, std::vector<ExpansionTerm> terms) {
  ExpansionResult r;
  r.u = u;
  for (auto& t : terms) {
    t.value = t.coefficient * t.basis_value;
    r.total += t.value;
  }
  r.terms = std::move(terms);
  return r;
}

}  // namespace

double normal_tail(double u) { return 0.5 * std::erfc(u / std::numbers::sqrt2); }
double normal_density(double u) { return std::exp(-0.5 * u * u) / kSqrt2Pi; }
GaussianKernels gaussian_kernels(double u) { return {normal_tail(u), normal_density(u)}; }

double gamma_function(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_function needs x > 0");
  return std::tgamma(x);
}

double ExpansionResult::term(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t.value;
  return 0.0;
}

ExpansionResult sfh_expansion_2d(const SteinerCoeffs2D& c, double u) {
  const auto k = gaussian_kernels(u);
  return finish(u, {{"L0", "tail", c.l0, k.tail},
                    {"L1", "phi", c.l1 / (2.0 * kSqrt2Pi), k.density},
                    {"sigma2", "u*phi", c.sigma2 / (2.0 * kPi), u * k.density}});
}

ExpansionResult expansion_3d(const SteinerCoeffs3D& c, double u) {
  const double phi = normal_density(u);
  return finish(u, {{"L1", "phi", c.l1 / (2.0 * kSqrt2Pi), phi},
                    {"L2", "u*phi", c.l2 / (2.0 * kPi), u * phi},
                    {"L3", "(u^2-1)*phi", c.l3 / std::pow(2.0 * kPi, 1.5), (u * u - 1.0) * phi}});
}

double joint_exceedance_asymptotic(double c, double d, int n, double u) {
  if (!(d >= 0.0) || d >= n) throw std::domain_error("joint exceedance needs 0 <= d < n");
  return std::pow(u, d - 1.0) * normal_density(u) * c * gamma_function(1.0 + 0.5 * (n - d)) /
         (std::pow(2.0, 0.5 * d) * std::pow(kPi, 0.5 * n));
}

double tangent_pair_coefficient(double radius) {
  return 8.0 * std::sqrt(radius) * gamma_function(1.75) / (std::pow(2.0, 0.25) * 3.0 * kPi);
}

ExpansionResult tangent_pair_expansion(double radius, double len1, double len2, double u) {
  if (!(radius > 0.0)) throw std::domain_error("tangent pair needs R > 0");
  const auto k = gaussian_kernels(u);
  return finish(u, {{"tail", "tail", 1.5, k.tail},
                    {"tangency", "u^-1/2*phi", -tangent_pair_coefficient(radius), k.density / std::sqrt(u)},
                    {"length", "phi", (len1 + len2) / kSqrt2Pi, k.density}});
}

double euler_density_2d(double chi, double sigma1, double sigma2, double x) {
  const double phi = normal_density(x);
  return chi * phi + sigma1 * x * phi / (2.0 * kSqrt2Pi) + sigma2 * (x * x - 1.0) * phi / (2.0 * kPi);
}

double polygon_upper_bound(double sigma1, double sigma2, double c, double u) {
  if (!(c > 0.0)) throw std::domain_error("polygon bound needs c > 0");
  // u*Phi(u/c) + c*phi(u/c) written as u + (c*phi(u/c) - u*Phibar(u/c)); the
  // bracket is kept apart from u so it never cancels.
  const double gap = c * normal_density(u / c) - u * normal_tail(u / c);
  return sfh_expansion_2d({sigma2, sigma1, 1.0}, u).total + sigma2 * gap * normal_density(u) / (2.0 * kPi);
}

ExpansionResult dihedral_expansion(double area1, double area2, double perimeter1, double perimeter2,
                                   double shared, double alpha, double u) {
  const double sub = dihedral_subtraction_constant(alpha);
  const double phi = normal_density(u);
  return finish(u, {{"L1", "phi", (perimeter1 + perimeter2 - shared * sub) / (2.0 * kSqrt2Pi), phi},
                    {"sigma2", "u*phi", (area1 + area2) / (2.0 * kPi), u * phi}});
}

}  // namespace gausstail
