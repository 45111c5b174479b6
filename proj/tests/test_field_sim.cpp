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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gausstail/expansion.hpp"
#include "gausstail/field_sim.hpp"
#include "gausstail/philox.hpp"

using namespace gausstail;

namespace {

constexpr double kPi = std::numbers::pi;

struct Moments {
  double n = 0, s = 0, s2 = 0, s4 = 0;
  void add(double x) {
    n += 1;
    s += x;
    s2 += x * x;
    s4 += x * x * x * x;
  }
  double mean() const { return s / n; }
  double second() const { return s2 / n; }
  // standard error of the sample second moment
  double second_se() const { return std::sqrt((s4 / n - second() * second()) / n); }
};

}  // namespace

TEST_CASE("philox known answers") {
  using C = PhiloxCounter;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("coefficient streams") {
  std::vector<double> a(2 * kDefaultWaves), b(2 * kDefaultWaves), c(2 * kDefaultWaves);
  draw_coefficients(11, 5, kDefaultWaves, a.data());
  draw_coefficients(11, 5, kDefaultWaves, b.data());
  draw_coefficients(11, 6, kDefaultWaves, c.data());
  CHECK(a == b);
  CHECK(a != c);
  CHECK_THROWS_AS(make_field(1, 0, 4), std::invalid_argument);
}

TEST_CASE("same seed and index give the same field") {
  const auto f = make_field(42, 17);
  const auto g = make_field(42, 17);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  for (int i = 0; i < 100; ++i) {
    const Vec2 t{d(rng), d(rng)};
    CHECK(f.value(t) == g.value(t));
  }
}

TEST_CASE("field moments") {
  Moments x, d1, d11, cross;
  std::vector<double> values;
  for (std::uint64_t r = 0; r < 10000; ++r) {
    const auto s = make_field(2024, r).evaluate({0.0, 0.0});
    x.add(s.value);
    d1.add(s.gradient.x);
    d11.add(s.hessian[0]);
    cross.add(s.gradient.x * s.gradient.y);
    values.push_back(s.value);
  }
  CHECK(std::abs(x.second() - 1.0) < 3 * x.second_se());
  CHECK(std::abs(d1.second() - 1.0) < 3 * d1.second_se());
  CHECK(std::abs(d11.second() - 1.5) < 3 * d11.second_se());
  CHECK(std::abs(cross.mean()) < 3 * std::sqrt(cross.second() / cross.n));

  // Anderson-Darling against N(0, 1); 1% critical value for a fully specified law.
  std::sort(values.begin(), values.end());
  const double n = double(values.size());
  double a2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double lo = 1.0 - normal_tail(values[i]);
    const double hi = normal_tail(values[values.size() - 1 - i]);
    a2 += (2.0 * double(i) + 1.0) * (std::log(lo) + std::log(hi));
  }
  a2 = -n - a2 / n;
  CHECK(a2 < 3.857);
}

TEST_CASE("covariance") {
  CHECK(covariance({0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  for (double r = 0.05; r <= 2.0; r += 0.05)
    for (double a : {0.0, 0.3, 1.1, 2.0}) {
      const Vec2 h = r * unit(a);
      CHECK(std::abs(covariance(h) - std::cyl_bessel_j(0.0, std::sqrt(2.0) * r)) <= 1e-3);
    }
  const double d = 1e-4;
  const double second = (covariance({d, 0}) - 2 * covariance({0, 0}) + covariance({-d, 0})) / (d * d);
  CHECK(second == doctest::Approx(-1.0).epsilon(1e-5));
  double worst = 0.0;
  for (double r = 0.5; r <= 4.0; r += 0.01)
    for (double a = 0.0; a < kPi; a += 0.05) worst = std::max(worst, std::abs(covariance(r * unit(a))));
  CHECK(worst < 0.9);
}

TEST_CASE("derivatives match finite differences") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  const double step = 1e-5;
  for (int i = 0; i < 100; ++i) {
    const auto f = make_field(9, std::uint64_t(i));
    const Vec2 t{d(rng), d(rng)};
    const auto s = f.evaluate(t);
    CHECK(s.value == doctest::Approx(f.value(t)).epsilon(1e-13));
    const double gx = (f.value({t.x + step, t.y}) - f.value({t.x - step, t.y})) / (2 * step);
    const double gy = (f.value({t.x, t.y + step}) - f.value({t.x, t.y - step})) / (2 * step);
    CHECK(std::abs(gx - s.gradient.x) < 1e-6);
    CHECK(std::abs(gy - s.gradient.y) < 1e-6);
    const auto px = f.evaluate({t.x + step, t.y}), mx = f.evaluate({t.x - step, t.y});
    const auto py = f.evaluate({t.x, t.y + step}), my = f.evaluate({t.x, t.y - step});
    CHECK(std::abs((px.gradient.x - mx.gradient.x) / (2 * step) - s.hessian[0]) < 1e-6);
    CHECK(std::abs((px.gradient.y - mx.gradient.y) / (2 * step) - s.hessian[1]) < 1e-6);
    CHECK(std::abs((py.gradient.x - my.gradient.x) / (2 * step) - s.hessian[1]) < 1e-6);
    CHECK(std::abs((py.gradient.y - my.gradient.y) / (2 * step) - s.hessian[2]) < 1e-6);
  }
}

TEST_CASE("rotating the point and the wave labels together") {
  const int k = kDefaultWaves;
  const auto f = make_field(5, 1);
  std::vector<double> shifted(2 * std::size_t(k));
  for (int i = 0; i < k; ++i) {
    shifted[std::size_t((i + 1) % k)] = f.coefficients()[std::size_t(i)];
    shifted[std::size_t(k + (i + 1) % k)] = f.coefficients()[std::size_t(k + i)];
  }
  const RandomWaveField g(shifted);
  const double a = 2 * kPi / k, c = std::cos(a), s = std::sin(a);
  for (const Vec2 t : {Vec2{0.3, -0.7}, Vec2{1.5, 0.2}, Vec2{-1.1, 1.9}}) {
    const Vec2 rt{c * t.x - s * t.y, s * t.x + c * t.y};
    CHECK(g.value(rt) == doctest::Approx(f.value(t)).epsilon(1e-12));
  }
}

TEST_CASE("basis rows reproduce the field") {
  const auto f = make_field(8, 2);
  std::vector<double> row(2 * kDefaultWaves);
  const Vec2 t{0.4, -1.3};
  basis_row(t, kDefaultWaves, row.data());
  double v = 0.0;
  for (std::size_t i = 0; i < row.size(); ++i) v += row[i] * f.coefficients()[i];
  CHECK(v == doctest::Approx(f.value(t)).epsilon(1e-13));
  CHECK(norm(wave_vector(3, kDefaultWaves)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}
