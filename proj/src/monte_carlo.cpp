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

#include "gausstail/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "gausstail/parallel.hpp"

namespace gausstail {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void sample_chain(const EdgeChain& chain, double h, std::vector<Vec2>& out) {
  for (const Edge& e : chain) {
    const double len = e.length();
    const int n = std::max(1, int(std::ceil(len / h - 1e-9)));
    for (int k = 0; k <= n; ++k) out.push_back(e.point_at(len * k / n));
  }
}

void check_diagnostic_options(const DiagnosticOptions& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw std::invalid_argument("diagnostics need 0 < alpha < 1");
  if (!(o.beta > 0.5 * (1.0 - o.alpha) && o.beta < 1.0))
    throw std::invalid_argument("diagnostics need (1 - alpha)/2 < beta < 1");
  if (!(o.grid_h > 0.0)) throw std::invalid_argument("diagnostic grid spacing must be positive");
}

Ball enclosing_ball(const std::vector<const PlanarSet*>& sets) {
  const double inf = std::numeric_limits<double>::infinity();
  Vec2 lo{inf, inf}, hi{-inf, -inf};
  for (const auto* s : sets) {
    const auto [a, b] = s->bounding_box();
    lo = {std::min(lo.x, a.x), std::min(lo.y, a.y)};
    hi = {std::max(hi.x, b.x), std::max(hi.y, b.y)};
  }
  Ball ball{0.5 * (lo + hi), 0.0};
  constexpr double step = 0.01;
  for (const auto* s : sets)
    for (Vec2 p : discretize(*s, step, 0.0)) ball.radius = std::max(ball.radius, norm(p - ball.center));
  ball.radius += step;
  return ball;
}

std::vector<MCEstimate> run(const std::vector<const PlanarSet*>& sets, const std::vector<double>& levels,
                            const MCOptions& options) {
  if (sets.empty()) throw std::invalid_argument("no sets to simulate");
  if (options.replicates <= 0) throw std::invalid_argument("replicate count must be positive");
  if (!(options.grid_h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  if (options.batch == 0) throw std::invalid_argument("batch size must be positive");
  if (options.diagnostics) check_diagnostic_options(options.diagnostic);
  const Ball ball = enclosing_ball(sets);
  if (2.0 * ball.radius > options.max_diameter)
    throw DomainError("set spans a disk of diameter " + std::to_string(2.0 * ball.radius) +
                      ", above the supported " + std::to_string(options.max_diameter));
  const int waves = options.waves;
  const int dim = 2 * waves;
  const double interior_h = options.interior_h > 0.0 ? options.interior_h : 2.0 * options.grid_h;

  std::vector<std::size_t> offsets{0};
  std::vector<Vec2> points;
  for (const auto* s : sets) {
    const auto pts = discretize(*s, options.grid_h, interior_h);
    points.insert(points.end(), pts.begin(), pts.end());
    offsets.push_back(points.size());
  }
  Eigen::MatrixXd basis(Eigen::Index(points.size()), dim);
  {
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (std::size_t p = 0; p < points.size(); ++p) {
      basis_row(points[p], waves, row.data());
      for (int k = 0; k < dim; ++k) basis(Eigen::Index(p), k) = row[std::size_t(k)];
    }
  }

  const auto n = std::size_t(options.replicates);
  const std::size_t batches = (n + options.batch - 1) / options.batch;
  // Per replicate, the smallest of the per-set maxima.
  std::vector<double> joint_max(n);
  parallel_for(
      batches,
      [&](std::size_t b) {
        const std::size_t r0 = b * options.batch;
        const std::size_t count = std::min(options.batch, n - r0);
        Eigen::MatrixXd z(dim, Eigen::Index(count));
        for (std::size_t c = 0; c < count; ++c)
          draw_coefficients(options.seed, r0 + c, waves, z.col(Eigen::Index(c)).data());
        const Eigen::MatrixXd x = basis * z;
        for (std::size_t c = 0; c < count; ++c) {
          double m = std::numeric_limits<double>::infinity();
          for (std::size_t s = 0; s + 1 < offsets.size(); ++s)
            m = std::min(m, x.col(Eigen::Index(c))
                                .segment(Eigen::Index(offsets[s]), Eigen::Index(offsets[s + 1] - offsets[s]))
                                .maxCoeff());
          joint_max[r0 + c] = m;
        }
      },
      options.workers);

  std::vector<MCEstimate> out;
  for (double u : levels) {
    MCEstimate e;
    e.u = u;
    e.replicates = options.replicates;
    e.grid_h = options.grid_h;
    for (double m : joint_max) e.exceedances += m >= u;
    e.p_hat = double(e.exceedances) / double(n);
    e.standard_error = std::sqrt(e.p_hat * (1.0 - e.p_hat) / double(n));
    out.push_back(e);
  }
  if (!options.diagnostics) return out;

  const auto& dopt = options.diagnostic;
  const DiagnosticGrid grid({ball.center, ball.radius + dopt.margin}, dopt.grid_h, waves);
  struct Job {
    std::size_t level;
    std::size_t replicate;
  };
  std::vector<Job> jobs;
  for (std::size_t l = 0; l < levels.size(); ++l) {
    std::int64_t taken = 0;
    for (std::size_t r = 0; r < n && taken < dopt.max_replicates; ++r) {
      if (joint_max[r] >= levels[l]) {
        jobs.push_back({l, r});
        ++taken;
      }
    }
  }
  std::vector<DiagnosticRecord> records(jobs.size());
  parallel_for(
      jobs.size(),
      [&](std::size_t j) {
        const auto field = make_field(options.seed, jobs[j].replicate, waves);
        records[j] = grid.run(field, levels[jobs[j].level], dopt);
      },
      options.workers);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    auto& d = out[jobs[j].level].diagnostics;
    const auto& r = records[j];
    d.diagnosed++;
    d.a1 += r.a1;
    d.a2 += r.a2;
    d.a3 += r.a3;
    d.a4 += r.a4;
    d.sandwich_checked += r.sandwich_checked;
    d.sandwich_failures += r.sandwich_checked && !r.sandwich_ok;
  }
  return out;
}

}  // namespace

std::vector<Vec2> discretize(const PlanarSet& set, double grid_h, double interior_h) {
  if (!(grid_h > 0.0)) throw std::invalid_argument("grid spacing must be positive");
  std::vector<Vec2> out;
  for (const auto& c : set.components()) {
    switch (c.kind) {
      case ComponentKind::point:
        out.push_back(c.point);
        break;
      case ComponentKind::curve:
        sample_chain(c.curve, grid_h, out);
        break;
      case ComponentKind::region:
        sample_chain(c.outer, grid_h, out);
        for (const auto& h : c.holes) sample_chain(h, grid_h, out);
        for (const auto& w : c.whiskers) sample_chain(w, grid_h, out);
        break;
    }
  }
  if (interior_h > 0.0) {
    const auto [lo, hi] = set.bounding_box();
    for (double i = std::ceil(lo.x / interior_h); i * interior_h <= hi.x; i += 1.0)
      for (double j = std::ceil(lo.y / interior_h); j * interior_h <= hi.y; j += 1.0) {
        const Vec2 p{i * interior_h, j * interior_h};
        if (set.in_interior(p)) out.push_back(p);
      }
  }
  return out;
}

Ball bounding_ball(const PlanarSet& set) { return enclosing_ball({&set}); }

std::pair<double, double> sandwich_radii(double x, double u, double alpha) {
  const double ua = std::pow(u, alpha);
  const double excess = std::max(0.0, x - u);
  const double lower = std::sqrt(2.0 * excess / (x + ua));
  const double upper =
      u > ua ? std::sqrt(2.0 * excess / (u - ua)) : std::numeric_limits<double>::infinity();
  return {lower, upper};
}

DiagnosticGrid::DiagnosticGrid(const Ball& ball, double h, int waves) : ball_(ball), h_(h), waves_(waves) {
  if (!(h > 0.0) || !(ball.radius > 0.0)) throw std::invalid_argument("diagnostic grid needs h > 0 and radius > 0");
  half_ = int(std::floor(ball.radius / h));
  const int side = 2 * half_ + 1;
  index_.assign(std::size_t(side) * std::size_t(side), -1);
  for (int i = -half_; i <= half_; ++i)
    for (int j = -half_; j <= half_; ++j) {
      if (std::hypot(i * h, j * h) > ball.radius) continue;
      const int slot = (i + half_) * side + (j + half_);
      index_[std::size_t(slot)] = int(points_.size());
      points_.push_back(ball.center + Vec2{i * h, j * h});
      slot_.push_back(slot);
    }
  const int dim = 2 * waves;
  basis_.resize(points_.size() * std::size_t(dim));
  for (std::size_t p = 0; p < points_.size(); ++p) basis_row(points_[p], waves, basis_.data() + p * std::size_t(dim));
}

DiagnosticRecord DiagnosticGrid::run(const RandomWaveField& field, double u, const DiagnosticOptions& options) const {
  check_diagnostic_options(options);
  if (field.waves() != waves_) throw std::invalid_argument("field and diagnostic grid use different K");
  const int dim = 2 * waves_;
  const int side = 2 * half_ + 1;
  const Eigen::Map<const RowMatrix> b(basis_.data(), Eigen::Index(points_.size()), dim);
  const Eigen::Map<const Eigen::VectorXd> coef(field.coefficients().data(), dim);
  const Eigen::VectorXd v = b * coef;

  auto neighbour = [&](int p, int di, int dj) {
    const int slot = slot_[std::size_t(p)];
    const int i = slot / side + di;
    const int j = slot % side + dj;
    if (i < 0 || j < 0 || i >= side || j >= side) return -1;
    return index_[std::size_t(i * side + j)];
  };

  DiagnosticRecord rec;
  std::vector<int> maxima;  // local maxima with value >= u
  int interior_above = 0;
  for (int p = 0; p < int(points_.size()); ++p) {
    bool is_max = true;
    bool interior = true;
    for (int di = -1; di <= 1 && is_max; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        const int q = neighbour(p, di, dj);
        if (q < 0) {
          interior = false;
          continue;
        }
        if (v(q) >= v(p)) {
          is_max = false;
          break;
        }
      }
    if (!is_max) continue;
    const double x = v(p);
    if (x >= u + 1.0) rec.a1 = true;
    if (x < u) continue;
    maxima.push_back(p);
    interior_above += interior;
    if (x < u + 1.0 && x > u) {
      // Directional curvature on B(t, u^-beta), sampled on 16 rays at 4 radii.
      const double ua = std::pow(u, options.alpha);
      const double radius = std::pow(u, -options.beta);
      for (int k = 0; k < 16; ++k) {
        const Vec2 g = unit(2.0 * std::numbers::pi * k / 16.0);
        for (int m = 1; m <= 4; ++m) {
          const auto s = field.evaluate(points_[std::size_t(p)] + (radius * m / 4.0) * g);
          const double q = g.x * g.x * s.hessian[0] + 2.0 * g.x * g.y * s.hessian[1] + g.y * g.y * s.hessian[2];
          if (q <= -x - ua) rec.a3 = true;
          if (q >= -x + ua) rec.a4 = true;
        }
      }
    }
  }
  rec.maxima_above = int(maxima.size());
  rec.a2 = interior_above >= 2;
  for (int p : maxima) {
    if (v(p) > rec.max_value || p == maxima.front()) {
      rec.max_value = v(p);
      rec.location = points_[std::size_t(p)];
    }
  }
  if (maxima.size() != 1) return rec;

  const int t = maxima.front();
  const Vec2 tp = points_[std::size_t(t)];
  std::tie(rec.r_lower, rec.r_upper) = sandwich_radii(v(t), u, options.alpha);
  rec.sandwich_checked = true;
  bool ok = true;
  for (int p = 0; p < int(points_.size()) && ok; ++p)
    if (norm(points_[std::size_t(p)] - tp) <= rec.r_lower && v(p) < u) ok = false;
  std::vector<char> seen(points_.size(), 0);
  std::vector<int> stack{t};
  seen[std::size_t(t)] = 1;
  while (!stack.empty() && ok) {
    const int p = stack.back();
    stack.pop_back();
    if (norm(points_[std::size_t(p)] - tp) > rec.r_upper) ok = false;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const int q = neighbour(p, di, dj);
        if (q >= 0 && !seen[std::size_t(q)] && v(q) >= u) {
          seen[std::size_t(q)] = 1;
          stack.push_back(q);
        }
      }
  }
  rec.sandwich_ok = ok;
  return rec;
}

DiagnosticRecord excursion_diagnostics(const RandomWaveField& field, const Ball& ball, double u,
                                       const DiagnosticOptions& options) {
  return DiagnosticGrid(ball, options.grid_h, field.waves()).run(field, u, options);
}

std::vector<MCEstimate> estimate_exceedance(const PlanarSet& set, const std::vector<double>& levels,
                                            const MCOptions& options) {
  return run({&set}, levels, options);
}

std::vector<MCEstimate> estimate_joint_exceedance(const std::vector<const PlanarSet*>& sets,
                                                  const std::vector<double>& levels, const MCOptions& options) {
  return run(sets, levels, options);
}

}  // namespace gausstail
