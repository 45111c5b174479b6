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

// Random-wave field on the plane:
//   X(t) = K^{-1/2} sum_k [xi_k cos(l_k . t) + eta_k sin(l_k . t)],
//   l_k = sqrt(2) (cos(2 pi k / K), sin(2 pi k / K)),
// with independent standard normal xi_k, eta_k. It is exactly Gaussian and
// stationary with Var X = 1, Var grad X = I and Var d11 X = 3/2 for K >= 5.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gausstail/geometry2d.hpp"

namespace gausstail {

inline constexpr int kDefaultWaves = 66;

struct FieldSample {
  double value = 0.0;
  Vec2 gradient;
  // Hessian entries (d11, d12, d22).
  std::array<double, 3> hessian{};
};

Vec2 wave_vector(int k, int waves);

// The 2K coefficients (xi_0..xi_{K-1}, eta_0..eta_{K-1}) of replicate
// `replicate`; a pure function of (seed, replicate, K).
void draw_coefficients(std::uint64_t seed, std::uint64_t replicate, int waves, double* out);

// Row of the linear map from coefficients to X(t): cos and sin terms scaled
// by K^{-1/2}, laid out like draw_coefficients.
void basis_row(Vec2 t, int waves, double* out);

class RandomWaveField {
 public:
  // coefficients holds xi then eta, 2K values.
  explicit RandomWaveField(std::vector<double> coefficients);

  int waves() const noexcept { return waves_; }
  const std::vector<double>& coefficients() const noexcept { return coef_; }
  double value(Vec2 t) const;
  FieldSample evaluate(Vec2 t) const;

 private:
  int waves_ = 0;
  std::vector<double> coef_;
  std::vector<Vec2> lambda_;
};

RandomWaveField make_field(std::uint64_t seed, std::uint64_t replicate, int waves = kDefaultWaves);

// E[X(t) X(t + h)] = K^{-1} sum_k cos(l_k . h).
double covariance(Vec2 h, int waves = kDefaultWaves);

}  // namespace gausstail
