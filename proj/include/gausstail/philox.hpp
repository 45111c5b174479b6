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

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
// pure function of (key, counter), so any replicate can be regenerated alone.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace gausstail {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

inline PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
    const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
    ctr = {std::uint32_t(p1 >> 32) ^ ctr[1] ^ key[0], std::uint32_t(p1), std::uint32_t(p0 >> 32) ^ ctr[3] ^ key[1],
           std::uint32_t(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

// Uniform in (0, 1) from 64 random bits; never 0 so log() is safe.
inline double uniform_open(std::uint64_t bits) { return (double(bits >> 11) + 0.5) * 0x1.0p-53; }

// Standard normals for stream `stream` under `seed`: block b of the stream
// yields normals 2b and 2b+1 by Box-Muller.
inline void philox_normals(std::uint64_t seed, std::uint64_t stream, double* out, std::size_t count) {
  const PhiloxKey key{std::uint32_t(seed), std::uint32_t(seed >> 32)};
  for (std::size_t b = 0; 2 * b < count; ++b) {
    const auto r = philox4x32_10({std::uint32_t(stream), std::uint32_t(stream >> 32), std::uint32_t(b), 0u}, key);
    const double u1 = uniform_open((std::uint64_t(r[0]) << 32) | r[1]);
    const double u2 = uniform_open((std::uint64_t(r[2]) << 32) | r[3]);
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    out[2 * b] = rad * std::cos(ang);
    if (2 * b + 1 < count) out[2 * b + 1] = rad * std::sin(ang);
  }
}

}  // namespace gausstail
