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

#include "gausstail/geometry3d.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gausstail {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> unique_coords(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
    if (out.empty() || x - out.back() > kCoincidenceTol) out.push_back(x);
  return out;
}

std::size_t coord_index(const std::vector<double>& coords, double x) {
  auto it = std::lower_bound(coords.begin(), coords.end(), x - kCoincidenceTol);
  return static_cast<std::size_t>(it - coords.begin());
}

}  // namespace

SteinerCoeffs3D polytope_coefficients(const PolytopeSummary& p) {
  if (!(p.volume >= 0.0) || !(p.surface_area >= 0.0))
    throw GeometryError("polytope volume and surface area must be non-negative");
  SteinerCoeffs3D out;
  out.l3 = p.volume;
  out.l2 = 0.5 * p.surface_area;
  for (const auto& e : p.edges) {
    if (!(e.length > 0.0)) throw GeometryError("polytope edge length must be positive");
    if (!(e.dihedral > 0.0 && e.dihedral < 2.0 * kPi))
      throw GeometryError("polytope dihedral angle must lie in (0, 2pi)");
    if (e.concave()) {
      if (2.0 * kPi - e.dihedral < 1e-9) throw GeometryError("concave dihedral too close to 2pi");
      out.l1 += e.length / std::tan(0.5 * e.dihedral) / kPi;
    } else {
      out.l1 += (kPi - e.dihedral) * e.length / (2.0 * kPi);
    }
  }
  return out;
}

double box_distance(const Box& box, const std::array<double, 3>& p) {
  double s = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double d = std::max({box.min[a] - p[a], 0.0, p[a] - box.max[a]});
    s += d * d;
  }
  return std::sqrt(s);
}

PolytopeSummary box_union(const std::vector<Box>& boxes) {
  if (boxes.empty()) throw GeometryError("box union has no boxes");
  std::array<std::vector<double>, 3> coords;
  for (const auto& b : boxes) {
    for (int a = 0; a < 3; ++a) {
      if (!std::isfinite(b.min[a]) || !std::isfinite(b.max[a]) || b.max[a] - b.min[a] <= kCoincidenceTol)
        throw GeometryError("box has non-positive extent");
      coords[a].push_back(b.min[a]);
      coords[a].push_back(b.max[a]);
    }
  }
  for (auto& c : coords) c = unique_coords(std::move(c));
  const std::array<std::size_t, 3> n{coords[0].size() - 1, coords[1].size() - 1, coords[2].size() - 1};
  std::vector<char> occ(n[0] * n[1] * n[2], 0);
  auto cell = [&](long i, long j, long k) -> bool {
    if (i < 0 || j < 0 || k < 0 || i >= long(n[0]) || j >= long(n[1]) || k >= long(n[2])) return false;
    return occ[(std::size_t(i) * n[1] + std::size_t(j)) * n[2] + std::size_t(k)] != 0;
  };
  auto width = [&](int a, long i) { return coords[a][i + 1] - coords[a][i]; };

  PolytopeSummary out;
  for (const auto& b : boxes) {
    std::array<std::size_t, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
      lo[a] = coord_index(coords[a], b.min[a]);
      hi[a] = coord_index(coords[a], b.max[a]);
    }
    for (std::size_t i = lo[0]; i < hi[0]; ++i)
      for (std::size_t j = lo[1]; j < hi[1]; ++j)
        for (std::size_t k = lo[2]; k < hi[2]; ++k) {
          char& c = occ[(i * n[1] + j) * n[2] + k];
          if (c) throw GeometryError("boxes have overlapping interiors");
          c = 1;
        }
    out.volume += (b.max[0] - b.min[0]) * (b.max[1] - b.min[1]) * (b.max[2] - b.min[2]);
  }

  // Index helper: position along axes (a, b, c) mapped back to (x, y, z).
  auto at = [&](int a, long ia, long ib, long ic) {
    std::array<long, 3> idx{};
    idx[a] = ia;
    idx[(a + 1) % 3] = ib;
    idx[(a + 2) % 3] = ic;
    return cell(idx[0], idx[1], idx[2]);
  };

  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    // Faces normal to axis a.
    for (long f = 0; f <= long(n[a]); ++f)
      for (long j = 0; j < long(n[b]); ++j)
        for (long k = 0; k < long(n[c]); ++k)
          if (at(a, f - 1, j, k) != at(a, f, j, k)) out.surface_area += width(b, j) * width(c, k);

    // Edges parallel to axis a.
    for (long p = 0; p <= long(n[b]); ++p) {
      for (long q = 0; q <= long(n[c]); ++q) {
        int run_pattern = 0;
        double run_length = 0.0;
        auto flush = [&] {
          if (run_length > 0.0) {
            const int count = __builtin_popcount(unsigned(run_pattern));
            out.edges.push_back({run_length, count == 1 ? kPi / 2.0 : 3.0 * kPi / 2.0});
          }
          run_length = 0.0;
          run_pattern = 0;
        };
        for (long i = 0; i < long(n[a]); ++i) {
          const int pattern = int(at(a, i, p - 1, q - 1)) | int(at(a, i, p, q - 1)) << 1 |
                              int(at(a, i, p - 1, q)) << 2 | int(at(a, i, p, q)) << 3;
          const int count = __builtin_popcount(unsigned(pattern));
          if (pattern == 0b1001 || pattern == 0b0110)
            throw GeometryError("boxes touch along an edge without sharing a face");
          const bool is_edge = count == 1 || count == 3;
          if (!is_edge || pattern != run_pattern) flush();
          if (is_edge) {
            run_pattern = pattern;
            run_length += width(a, i);
          }
        }
        flush();
      }
    }
  }

  // Vertex neighbourhoods: occupied and empty cells of each 2x2x2 block must be
  // face-connected, otherwise two boxes meet only at a corner.
  for (long i = 0; i <= long(n[0]); ++i)
    for (long j = 0; j <= long(n[1]); ++j)
      for (long k = 0; k <= long(n[2]); ++k) {
        std::array<bool, 8> v{};
        for (int m = 0; m < 8; ++m) v[m] = cell(i - 1 + (m & 1), j - 1 + ((m >> 1) & 1), k - 1 + ((m >> 2) & 1));
        for (bool state : {true, false}) {
          std::array<bool, 8> seen{};
          int components = 0;
          for (int s = 0; s < 8; ++s) {
            if (v[s] != state || seen[s]) continue;
            ++components;
            std::vector<int> stack{s};
            seen[s] = true;
            while (!stack.empty()) {
              const int m = stack.back();
              stack.pop_back();
              for (int bit : {1, 2, 4}) {
                const int nb = m ^ bit;
                if (v[nb] == state && !seen[nb]) {
                  seen[nb] = true;
                  stack.push_back(nb);
                }
              }
            }
          }
          if (components > 1) throw GeometryError("boxes touch at a corner without sharing a face");
        }
      }
  return out;
}

double dihedral_subtraction_constant(double alpha) {
  if (!(alpha > 0.0 && alpha < kPi)) throw std::domain_error("dihedral angle must lie in (0, pi)");
  return (0.5 * (kPi + alpha) + 1.0 / std::tan(0.5 * alpha)) / kPi;
}

}  // namespace gausstail
