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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gausstail/expansion.hpp"

using namespace gausstail;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2Pi = std::sqrt(2 * kPi);

double term_sum(const ExpansionResult& r) {
  double s = 0.0;
  for (const auto& t : r.terms) s += t.value;
  return s;
}

}  // namespace

TEST_CASE("gaussian kernels") {
  const struct {
    double u, tail, density;
  } table[] = {{0, 0.5, 0.39894228040143267794},
               {1, 0.15865525393145705141, 0.2419707245191433498},
               {2.5, 0.006209665325776135167, 0.017528300493568537362},
               {5, 2.8665157187919391167e-7, 1.4867195147342977079e-6},
               {8, 6.2209605742717841235e-16, 5.052271083536892288e-15}};
  for (const auto& r : table) {
    const auto k = gaussian_kernels(r.u);
    CHECK(k.tail == doctest::Approx(r.tail).epsilon(1e-13));
    CHECK(k.density == doctest::Approx(r.density).epsilon(1e-13));
  }
  for (double u : {0.3, 1.7, 4.0}) CHECK(normal_tail(u) + normal_tail(-u) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("gamma function") {
  CHECK(gamma_function(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_function(2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_function(0.5) == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
  CHECK(gamma_function(1.75) == doctest::Approx(0.91906252684888323385).epsilon(1e-13));
  CHECK(gamma_function(1.25) == doctest::Approx(0.90640247705547707798).epsilon(1e-13));
  CHECK(gamma_function(3.3) == doctest::Approx(2.6834373819557683003).epsilon(1e-13));
  CHECK(gamma_function(7.5) == doctest::Approx(1871.2543057977883465).epsilon(1e-13));
  CHECK_THROWS_AS(gamma_function(0.0), std::domain_error);
  CHECK_THROWS_AS(gamma_function(-1.5), std::domain_error);
}

TEST_CASE("2d expansion") {
  const SteinerCoeffs2D convex{1.0, 4.0, 1.0};
  const auto r = sfh_expansion_2d(convex, 2.0);
  REQUIRE(r.terms.size() == 3);
  CHECK(r.terms[0].coefficient == 1.0);
  CHECK(r.terms[0].basis == "tail");
  CHECK(r.term("L1") == doctest::Approx(4.0 / (2 * kSqrt2Pi) * normal_density(2.0)).epsilon(1e-15));

  const SteinerCoeffs2D angle{0.0, 4.0, 0.93169011381620932846};
  CHECK(sfh_expansion_2d(angle, 2.5).total == doctest::Approx(0.019771044135064516429).epsilon(1e-13));

  const SteinerCoeffs2D empty{0.0, 8.0, (kPi - 4) / kPi};
  for (double u : {1.0, 2.0, 3.5}) {
    const double want = (kPi - 4) / kPi * normal_tail(u) + 4.0 / kSqrt2Pi * normal_density(u);
    CHECK(sfh_expansion_2d(empty, u).total == doctest::Approx(want).epsilon(1e-14));
  }
}

TEST_CASE("3d expansion") {
  const double phi = normal_density(3.0);
  const double want = 3 * phi / (2 * kSqrt2Pi) + 3 * 3 * phi / (2 * kPi) + 8 * phi / std::pow(2 * kPi, 1.5);
  const auto cube = expansion_3d({3.0, 3.0, 1.0}, 3.0);
  CHECK(cube.total == doctest::Approx(want).epsilon(1e-14));
  CHECK(cube.total == doctest::Approx(0.01125138616058981374).epsilon(1e-13));
  const auto wire = expansion_3d({2.0, 0.0, 0.0}, 2.0);
  CHECK(wire.total == doctest::Approx(wire.term("L1")).epsilon(1e-15));
  const auto box = expansion_3d({4.0, 5.0, 2.0}, 2.5);
  CHECK(box.term("L2") == doctest::Approx(5.0 * 2.5 * normal_density(2.5) / (2 * kPi)).epsilon(1e-14));
}

TEST_CASE("term sums") {
  for (double u : {0.5, 1.5, 2.5, 4.0, 6.0}) {
    for (const auto& r : {sfh_expansion_2d({1.3, 5.1, -0.2}, u), expansion_3d({4.9, 7.0, 3.0}, u),
                          tangent_pair_expansion(0.7, 1.0, 2.0, u), dihedral_expansion(1, 2, 4, 6, 1, 1.1, u)}) {
      CHECK(std::abs(term_sum(r) - r.total) <= 1e-14 * std::abs(r.total));
    }
  }
}

TEST_CASE("joint exceedance") {
  for (double u : {1.5, 2.5, 4.0}) {
    const double base = normal_density(u) / u;
    CHECK(joint_exceedance_asymptotic(kPi, 0.0, 2, u) == doctest::Approx(base).epsilon(1e-14));
    CHECK(joint_exceedance_asymptotic(4.0, 0.0, 2, u) == doctest::Approx(4.0 / kPi * base).epsilon(1e-14));
    // tangent pair: area ~ (8/3) sqrt(R) eps^{3/2}, so d = 1/2
    for (double r : {0.5, 1.0, 2.0}) {
      const double joint = joint_exceedance_asymptotic(8.0 / 3.0 * std::sqrt(r), 0.5, 2, u);
      CHECK(joint == doctest::Approx(tangent_pair_coefficient(r) * normal_density(u) / std::sqrt(u)).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(joint_exceedance_asymptotic(1.0, 2.0, 2, 2.0), std::domain_error);
}

TEST_CASE("tangent pair expansion") {
  CHECK(tangent_pair_coefficient(1.0) == doctest::Approx(0.65600389733375293279).epsilon(1e-14));
  const auto a = tangent_pair_expansion(1.0, 1.0, 3.0, 2.5);
  const auto b = tangent_pair_expansion(1.0, 2.0, 6.0, 2.5);
  CHECK(a.term("tail") == doctest::Approx(1.5 * normal_tail(2.5)).epsilon(1e-15));
  CHECK(b.term("tail") == a.term("tail"));
  CHECK(b.term("tangency") == a.term("tangency"));
  CHECK(b.term("length") == doctest::Approx(2 * a.term("length")).epsilon(1e-15));
  CHECK(a.term("tangency") < 0.0);
}

TEST_CASE("euler density") {
  CHECK(euler_density_2d(0, 0, 0, 1.3) == 0.0);
  const double phi3 = normal_density(3.0);
  CHECK(euler_density_2d(1, 2 * kPi, kPi, 3.0) ==
        doctest::Approx(phi3 * (1 + 3 * 2 * kPi / (2 * kSqrt2Pi) + kPi * 8 / (2 * kPi))).epsilon(1e-14));

  // integral of the density from u to infinity equals the expansion
  const double chi = 1.0, s1 = 4.0, s2 = 1.0;
  for (double u : {1.0, 2.0, 3.0}) {
    const int n = 20000;
    const double top = u + 15.0, step = (top - u) / n;
    double sum = euler_density_2d(chi, s1, s2, u) + euler_density_2d(chi, s1, s2, top);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * euler_density_2d(chi, s1, s2, u + i * step);
    CHECK(sum * step / 3.0 == doctest::Approx(sfh_expansion_2d({s2, s1, chi}, u).total).epsilon(1e-8));
  }

  // derivative consistency
  for (double u = 1.0; u <= 5.0; u += 0.25) {
    const double d = 1e-5;
    const double slope =
        -(sfh_expansion_2d({s2, s1, chi}, u + d).total - sfh_expansion_2d({s2, s1, chi}, u - d).total) / (2 * d);
    CHECK(std::abs(slope - euler_density_2d(chi, s1, s2, u)) < 1e-6);
  }
}

TEST_CASE("dominance ordering") {
  const SteinerCoeffs2D c{1.0, 4.0, 1.0};
  double prev_area = 0.0, prev_len = 0.0;
  for (double u = 2.0; u <= 6.0; u += 0.25) {
    const auto r = sfh_expansion_2d(c, u);
    const double area_over_len = r.term("sigma2") / r.term("L1");
    const double len_over_tail = r.term("L1") / r.term("L0");
    CHECK(area_over_len > prev_area);
    CHECK(len_over_tail > prev_len);
    prev_area = area_over_len;
    prev_len = len_over_tail;
  }
}

TEST_CASE("polygon upper bound") {
  const double c = std::sqrt(0.5);
  const struct {
    double sigma1, sigma2;
  } convex[] = {{4.0, 1.0}, {2 * kPi, kPi}, {kPi + 2, kPi / 2}, {6.0, 2.0}};
  for (const auto& s : convex)
    for (double u = 2.0; u <= 6.0; u += 0.1)
      CHECK(polygon_upper_bound(s.sigma1, s.sigma2, c, u) >= sfh_expansion_2d({s.sigma2, s.sigma1, 1.0}, u).total);
  CHECK(polygon_upper_bound(4.0, 0.0, c, 2.0) ==
        doctest::Approx(normal_tail(2.0) + 4.0 * normal_density(2.0) / (2 * kSqrt2Pi)).epsilon(1e-15));
  const double gap = polygon_upper_bound(4.0, 1.0, c, 8.0) - sfh_expansion_2d({1.0, 4.0, 1.0}, 8.0).total;
  CHECK(gap >= 0.0);
  CHECK(gap < 1e-3 * normal_density(8.0));
  CHECK_THROWS_AS(polygon_upper_bound(4.0, 1.0, 0.0, 2.0), std::domain_error);
}

TEST_CASE("dihedral expansion") {
  const double u = 2.5, phi = normal_density(u);
  const auto r = dihedral_expansion(1.0, 1.0, 4.0, 4.0, 1.0, kPi / 2, u);
  CHECK(r.term("L1") == doctest::Approx((8.0 - 1.0683098861837906715) * phi / (2 * kSqrt2Pi)).epsilon(1e-14));
  CHECK(r.term("sigma2") == doctest::Approx(2.0 * u * phi / (2 * kPi)).epsilon(1e-14));
  const auto apart = dihedral_expansion(1.0, 2.0, 4.0, 6.0, 0.0, 1.0, u);
  const auto one = dihedral_expansion(1.0, 0.0, 4.0, 0.0, 0.0, 1.0, u);
  const auto two = dihedral_expansion(0.0, 2.0, 0.0, 6.0, 0.0, 1.0, u);
  CHECK(apart.total == doctest::Approx(one.total + two.total).epsilon(1e-15));
  const auto flat = dihedral_expansion(1.0, 1.0, 4.0, 4.0, 1.0, kPi - 1e-9, u);
  CHECK(flat.term("L1") == doctest::Approx(7.0 * phi / (2 * kSqrt2Pi)).epsilon(1e-8));
  CHECK_THROWS_AS(dihedral_expansion(1, 1, 4, 4, 1, kPi, u), std::domain_error);
}
