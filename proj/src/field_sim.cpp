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

#include "gausstail/field_sim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gausstail/philox.hpp"

namespace gausstail {
namespace {

void check_waves(int waves) {
  if (waves < 5) throw std::invalid_argument("random-wave field needs K >= 5, got " + std::to_string(waves));
}

}  // namespace

Vec2 wave_vector(int k, int waves) {
  const double a = 2.0 * std::numbers::pi * k / waves;
  return std::numbers::sqrt2 * Vec2{std::cos(a), std::sin(a)};
}

void draw_coefficients(std::uint64_t seed, std::uint64_t replicate, int waves, double* out) {
  check_waves(waves);
  philox_normals(seed, replicate, out, 2 * std::size_t(waves));
}

void basis_row(Vec2 t, int waves, double* out) {
  const double scale = 1.0 / std::sqrt(double(waves));
  for (int k = 0; k < waves; ++k) {
    const double phase = dot(wave_vector(k, waves), t);
    out[k] = scale * std::cos(phase);
    out[waves + k] = scale * std::sin(phase);
  }
}

RandomWaveField::RandomWaveField(std::vector<double> coefficients) : coef_(std::move(coefficients)) {
  if (coef_.size() % 2 != 0) throw std::invalid_argument("random-wave coefficients must come in pairs");
  waves_ = int(coef_.size() / 2);
  check_waves(waves_);
  for (int k = 0; k < waves_; ++k) lambda_.push_back(wave_vector(k, waves_));
}

double RandomWaveField::value(Vec2 t) const {
  double s = 0.0;
  for (int k = 0; k < waves_; ++k) {
    const double phase = dot(lambda_[k], t);
    s += coef_[k] * std::cos(phase) + coef_[waves_ + k] * std::sin(phase);
  }
  return s / std::sqrt(double(waves_));
}

FieldSample RandomWaveField::evaluate(Vec2 t) const {
  FieldSample out;
  for (int k = 0; k < waves_; ++k) {
    const Vec2 l = lambda_[k];
    const double phase = dot(l, t);
    const double c = std::cos(phase);
    const double s = std::sin(phase);
    const double xi = coef_[k];
    const double eta = coef_[waves_ + k];
    const double v = xi * c + eta * s;
    const double d = -xi * s + eta * c;
    out.value += v;
    out.gradient = out.gradient + d * l;
    out.hessian[0] -= v * l.x * l.x;
    out.hessian[1] -= v * l.x * l.y;
    out.hessian[2] -= v * l.y * l.y;
  }
  const double scale = 1.0 / std::sqrt(double(waves_));
  out.value *= scale;
  out.gradient = scale * out.gradient;
  for (double& h : out.hessian) h *= scale;
  return out;
}

RandomWaveField make_field(std::uint64_t seed, std::uint64_t replicate, int waves) {
  check_waves(waves);
  std::vector<double> coef(2 * std::size_t(waves));
  draw_coefficients(seed, replicate, waves, coef.data());
  return RandomWaveField(std::move(coef));
}

double covariance(Vec2 h, int waves) {
  check_waves(waves);
  double s = 0.0;
  for (int k = 0; k < waves; ++k) s += std::cos(dot(wave_vector(k, waves), h));
  return s / waves;
}

}  // namespace gausstail
