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
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>

#include <json.hpp>

#include "gausstail/geometry_io.hpp"
#include "gausstail/tube_oracle.hpp"

using namespace gausstail;

namespace {

constexpr double kPi = std::numbers::pi;

PlanarSet fixture(const std::string& name) {
  return validate_set(load_geometry(std::string(GAUSSTAIL_FIXTURES) + "/" + name + ".json").planar);
}

PlanarSet curve(const EdgeChain& edges) {
  SetDescription d;
  d.components.push_back({});
  d.components[0].curve = edges;
  return validate_set(d);
}

PlanarSet square(double x0, double y0) {
  SetDescription d;
  d.components.push_back({});
  d.components[0].outer = {Edge::segment({x0, y0}, {x0 + 1, y0}), Edge::segment({x0 + 1, y0}, {x0 + 1, y0 + 1}),
                           Edge::segment({x0 + 1, y0 + 1}, {x0, y0 + 1}), Edge::segment({x0, y0 + 1}, {x0, y0})};
  return validate_set(d);
}

std::vector<double> multiples(double h, std::initializer_list<int> ks) {
  std::vector<double> out;
  for (int k : ks) out.push_back(k * h);
  return out;
}

}  // namespace

TEST_CASE("distance fields") {
  const auto point = oracle_geometry(fixture("single_point"));
  CHECK(point.distance({3, 4, 0}) == doctest::Approx(5.0).epsilon(1e-15));

  const auto seg = oracle_geometry(curve({Edge::segment({0, 0}, {1, 0})}));
  CHECK(seg.distance({0.5, 0.2, 0}) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(seg.distance({1.3, 0.4, 0}) == doctest::Approx(0.5).epsilon(1e-15));

  const Edge arc = Edge::arc({0, 0}, 1.0, 0.3, 2.5, true);
  const auto g = oracle_geometry(curve({arc}));
  EdgeChain poly;
  const int n = 20000;
  for (int i = 0; i < n; ++i)
    poly.push_back(Edge::segment(unit(0.3 + 2.2 * i / n), unit(0.3 + 2.2 * (i + 1) / n)));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Vec2 p{d(rng), d(rng)};
    double best = 1e300;
    for (const auto& e : poly) best = std::min(best, e.distance(p));
    CHECK(std::abs(g.distance({p.x, p.y, 0}) - best) < 1e-7);
  }

  // region interiors are at distance 0
  const auto disk = oracle_geometry(fixture("disk"));
  CHECK(disk.distance({0.2, 0.1, 0}) == 0.0);
  CHECK(disk.distance({2.0, 0.0, 0}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tube volumes of simple sets") {
  SUBCASE("disk") {
    const auto f = distance_field(oracle_geometry(fixture("disk")), 0.1, 1e-3);
    CHECK(tube_volume(f, 0.1) == doctest::Approx(kPi * 1.1 * 1.1).epsilon(0.01));
  }
  SUBCASE("segment") {
    const auto f = distance_field(oracle_geometry(curve({Edge::segment({0, 0}, {1, 0})})), 0.05, 1e-3);
    CHECK(tube_volume(f, 0.05) == doctest::Approx(2 * 0.05 + kPi * 0.05 * 0.05).epsilon(0.01));
  }
  SUBCASE("empty square") {
    const auto f = distance_field(oracle_geometry(fixture("empty_square")), 0.05, 1e-3);
    CHECK(tube_volume(f, 0.05) == doctest::Approx(8 * 0.05 + (kPi - 4) * 0.05 * 0.05).epsilon(0.02));
  }
}

TEST_CASE("tube volume is monotone in eps") {
  const auto f = distance_field(oracle_geometry(fixture("l_hexagon")), 0.3, 4e-3);
  const auto eps = eps_grid(0.01, 0.3, 30, 4e-3);
  const auto v = tube_volumes(f, eps);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}

TEST_CASE("resolution convergence") {
  // midpoint counting error is at most a boundary-length multiple of h
  const double eps = 0.1;
  const double exact = kPi * (1 + eps) * (1 + eps);
  const double perimeter = 2 * kPi * (1 + eps);
  for (double h : {4e-3, 2e-3, 1e-3}) {
    const auto f = distance_field(oracle_geometry(fixture("disk")), eps, h);
    CHECK(std::abs(tube_volume(f, eps) - exact) <= 3.0 * perimeter * h / 2);
  }
}

TEST_CASE("steiner fits") {
  SUBCASE("disk") {
    const auto c = oracle_coefficients(fixture("disk")).coeffs_2d();
    CHECK(c.provenance == Provenance::fitted);
    CHECK(c.sigma2 == doctest::Approx(kPi).epsilon(0.005));
    CHECK(c.l1 == doctest::Approx(2 * kPi).epsilon(0.02));
    CHECK(std::abs(c.l0 - 1.0) < 0.05);
  }
  SUBCASE("whiskered square") {
    OracleOptions o;
    o.eps_max = 0.45;
    const auto c = oracle_coefficients(fixture("whisker_square"), o).coeffs_2d();
    CHECK(c.l1 == doctest::Approx(6.0).epsilon(0.02));
    CHECK(std::abs(c.l0 - (2 * kPi - 4) / kPi) < 0.05);
  }
  SUBCASE("angle") {
    OracleOptions o;
    o.eps_max = 0.45;
    const auto c = oracle_coefficients(fixture("angle"), o).coeffs_2d();
    CHECK(std::abs(c.l0 - 0.93169011381620932846) < 0.05);
  }
  SUBCASE("cube") {
    OracleOptions o;
    o.h = 0.02;
    o.eps_max = 1.0;
    const auto c = oracle_coefficients(std::vector<Box>{{{0, 0, 0}, {1, 1, 1}}}, o).coeffs_3d();
    CHECK(c.l1 == doctest::Approx(3.0).epsilon(0.03));
    CHECK(c.l2 == doctest::Approx(3.0).epsilon(0.03));
  }
}

TEST_CASE("fit errors") {
  const std::vector<double> few{0.1, 0.2, 0.3};
  CHECK_THROWS_AS(fit_steiner(few, few, 2, 1e-3), OracleError);
  std::vector<double> narrow, vol;
  for (int i = 0; i < 10; ++i) {
    narrow.push_back(0.1 + 0.01 * i);
    vol.push_back(1.0);
  }
  CHECK_THROWS_AS(fit_steiner(narrow, vol, 2, 1e-3), OracleError);
  CHECK_THROWS_AS(fit_steiner(narrow, vol, 2, 0.05), OracleError);
  OracleOptions o;
  o.eps_max = 0.01;
  CHECK_THROWS_AS(oracle_coefficients(fixture("unit_square"), o), OracleError);
}

TEST_CASE("grid limits") {
  const auto g = oracle_geometry(fixture("unit_square"));
  CHECK_THROWS_AS(distance_field(g, 0.1, 1e-3, 1000), OracleError);
  const auto f = distance_field(g, 0.1, 1e-2);
  CHECK_THROWS_AS(tube_volume(f, 0.5), OracleError);
  const auto other = distance_field(g, 0.2, 1e-2);
  CHECK_THROWS_AS(intersection_tube_volume({&f, &other}, 0.05), OracleError);
}

TEST_CASE("intersection constants") {
  SUBCASE("disjoint sets") {
    const auto a = oracle_geometry(square(0, 0));
    const auto b = oracle_geometry(square(1.5, 0));
    const auto grid = make_grid(2, {0, 0, 0}, {2.5, 1, 0}, 0.3, 1e-2);
    const auto fa = distance_field(a, grid, 0.3);
    const auto fb = distance_field(b, grid, 0.3);
    CHECK(intersection_tube_volume({&fa, &fb}, 0.24) == 0.0);
  }
  SUBCASE("squares meeting at a corner") {
    const double h = 1e-4;
    const auto eps = multiples(h, {20, 30, 45, 70, 100, 150, 200});
    const auto grid = make_grid(2, {1, 1, 0}, {1, 1, 0}, eps.back() * 1.1, h);
    const auto f1 = distance_field(oracle_geometry(square(1, 0)), grid, eps.back());
    const auto f3 = distance_field(oracle_geometry(square(0, 1)), grid, eps.back());
    const auto c = estimate_intersection_constant(eps, intersection_tube_volumes({&f1, &f3}, eps), 2.0);
    CHECK(c.c == doctest::Approx(kPi / 2 + 2).epsilon(0.01));
    CHECK_FALSE(c.mixed_order_warning);
  }
  SUBCASE("perpendicular crossing at two resolutions") {
    const auto a = oracle_geometry(fixture("crossing_a"));
    const auto b = oracle_geometry(fixture("crossing_b"));
    for (double h : {1e-3, 5e-4}) {
      const auto eps = multiples(h, {10, 20, 40, 80, 160});
      const auto grid = make_grid(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}, eps.back(), h);
      const auto fa = distance_field(a, grid, eps.back());
      const auto fb = distance_field(b, grid, eps.back());
      const auto c = estimate_intersection_constant(eps, intersection_tube_volumes({&fa, &fb}, eps), 2.0);
      CHECK(c.c == doctest::Approx(4.0).epsilon(1e-9));
      CHECK_FALSE(c.mixed_order_warning);
    }
  }
  SUBCASE("tangent pair") {
    const double h = 5e-6;
    const auto eps = eps_grid(10 * h, 100 * h, 8, h);
    const auto v = tangent_pair_oracle_areas(1.0, eps, h);
    for (std::size_t i = 0; i < eps.size(); ++i)
      CHECK(v[i] == doctest::Approx(tangent_pair_intersection_area(1.0, eps[i]).exact).epsilon(0.02));
    CHECK(estimate_intersection_constant(eps, v, 2.0).mixed_order_warning);
    const auto c = estimate_intersection_constant(eps, v, 1.5);
    CHECK_FALSE(c.mixed_order_warning);
    CHECK(c.c == doctest::Approx(8.0 / 3.0).epsilon(0.02));
  }
}

TEST_CASE("grid field dump") {
  const auto f = distance_field(oracle_geometry(fixture("unit_square")), 0.1, 0.05);
  const auto stem = std::filesystem::temp_directory_path() / "gausstail_grid_dump";
  write_grid_field(f, stem);
  auto raw = stem;
  raw += ".f32";
  auto meta = stem;
  meta += ".json";
  CHECK(std::filesystem::file_size(raw) == 4 * f.values.size());
  std::ifstream in(meta);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["h"].get<double>() == 0.05);
  CHECK(j["dims"][0].get<std::size_t>() * j["dims"][1].get<std::size_t>() == f.values.size());
  std::filesystem::remove(raw);
  std::filesystem::remove(meta);
}
