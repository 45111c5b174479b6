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

#include "gausstail/geometry2d.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>

namespace gausstail {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Intersection points computed from tangential contacts carry sqrt-of-rounding
// error, so matching them to vertices uses a looser tolerance.
constexpr double kContactTol = 1e-7;

double wrap_two_pi(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

bool is_finite(Vec2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

bool near(Vec2 a, Vec2 b, double tol = kCoincidenceTol) { return norm(a - b) <= tol; }

std::string fmt_point(Vec2 p) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "(%.9g, %.9g)", p.x, p.y);
  return buf;
}

// Angular position of `angle` along the arc, measured from its start in the
// direction of travel, in [0, 2pi).
double arc_offset(const Arc& arc, double angle) {
  return arc.sweep > 0.0 ? wrap_two_pi(angle - arc.start_angle)
                         : wrap_two_pi(arc.start_angle - angle);
}

bool in_arc_range(const Arc& arc, double angle, double tol = 0.0) {
  const double off = arc_offset(arc, angle);
  return off <= std::abs(arc.sweep) + tol || off >= kTwoPi - tol;
}

Vec2 arc_point(const Arc& arc, double angle) { return arc.center + arc.radius * unit(angle); }

Vec2 arc_tangent(const Arc& arc, double angle) {
  const double s = arc.sweep > 0.0 ? 1.0 : -1.0;
  return {-s * std::sin(angle), s * std::cos(angle)};
}

}  // namespace

// ---------------------------------------------------------------------------
// Edge

Edge Edge::segment(Vec2 from, Vec2 to) {
  if (!is_finite(from) || !is_finite(to)) throw GeometryError("segment endpoint is not finite");
  if (near(from, to)) throw GeometryError("segment " + fmt_point(from) + " has zero length");
  return Edge(Segment{from, to});
}

Edge Edge::arc(Vec2 center, double radius, double from_angle, double to_angle, bool ccw) {
  const double sweep =
      ccw ? wrap_two_pi(to_angle - from_angle) : -wrap_two_pi(from_angle - to_angle);
  return arc_with_sweep(center, radius, from_angle, sweep);
}

Edge Edge::arc_with_sweep(Vec2 center, double radius, double start_angle, double sweep) {
  if (!is_finite(center) || !std::isfinite(start_angle) || !std::isfinite(sweep))
    throw GeometryError("arc parameters are not finite");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw GeometryError("arc radius must be positive");
  if (std::abs(sweep) * radius <= kCoincidenceTol || std::abs(sweep) >= kTwoPi)
    throw GeometryError("arc sweep must lie in (0, 2pi)");
  return Edge(Arc{center, radius, start_angle, sweep});
}

Vec2 Edge::start() const {
  if (const auto* s = std::get_if<Segment>(&geom_)) return s->from;
  const auto& a = std::get<Arc>(geom_);
  return arc_point(a, a.start_angle);
}

Vec2 Edge::end() const {
  if (const auto* s = std::get_if<Segment>(&geom_)) return s->to;
  const auto& a = std::get<Arc>(geom_);
  return arc_point(a, a.start_angle + a.sweep);
}

Vec2 Edge::start_tangent() const { return tangent_at(0.0); }
Vec2 Edge::end_tangent() const { return tangent_at(length()); }

Vec2 Edge::point_at(double s) const {
  if (const auto* seg = std::get_if<Segment>(&geom_)) {
    return seg->from + (s / length()) * (seg->to - seg->from);
  }
  const auto& a = std::get<Arc>(geom_);
  const double dir = a.sweep > 0.0 ? 1.0 : -1.0;
  return arc_point(a, a.start_angle + dir * s / a.radius);
}

Vec2 Edge::tangent_at(double s) const {
  if (const auto* seg = std::get_if<Segment>(&geom_)) {
    return (seg->to - seg->from) / length();
  }
  const auto& a = std::get<Arc>(geom_);
  const double dir = a.sweep > 0.0 ? 1.0 : -1.0;
  return arc_tangent(a, a.start_angle + dir * s / a.radius);
}

double Edge::length() const {
  if (const auto* s = std::get_if<Segment>(&geom_)) return norm(s->to - s->from);
  const auto& a = std::get<Arc>(geom_);
  return std::abs(a.sweep) * a.radius;
}

double Edge::curvature() const {
  if (!is_arc()) return 0.0;
  const auto& a = std::get<Arc>(geom_);
  return (a.sweep > 0.0 ? 1.0 : -1.0) / a.radius;
}

double Edge::turning() const { return is_arc() ? std::get<Arc>(geom_).sweep : 0.0; }

double Edge::distance(Vec2 p) const {
  if (const auto* s = std::get_if<Segment>(&geom_)) {
    const Vec2 d = s->to - s->from;
    const double t = std::clamp(dot(p - s->from, d) / dot(d, d), 0.0, 1.0);
    return norm(p - (s->from + t * d));
  }
  const auto& a = std::get<Arc>(geom_);
  const Vec2 rel = p - a.center;
  if (in_arc_range(a, std::atan2(rel.y, rel.x))) return std::abs(norm(rel) - a.radius);
  return std::min(norm(p - start()), norm(p - end()));
}

double Edge::project(Vec2 p) const {
  if (const auto* s = std::get_if<Segment>(&geom_)) {
    const Vec2 d = s->to - s->from;
    return std::clamp(dot(p - s->from, d) / dot(d, d), 0.0, 1.0) * norm(d);
  }
  const auto& a = std::get<Arc>(geom_);
  const Vec2 rel = p - a.center;
  const double ang = std::atan2(rel.y, rel.x);
  if (in_arc_range(a, ang)) {
    const double off = arc_offset(a, ang);
    return (off > std::abs(a.sweep) ? 0.0 : off) * a.radius;
  }
  return norm(p - start()) <= norm(p - end()) ? 0.0 : length();
}

double Edge::green_area() const {
  if (const auto* s = std::get_if<Segment>(&geom_)) return 0.5 * cross(s->from, s->to);
  const auto& a = std::get<Arc>(geom_);
  const double t0 = a.start_angle;
  const double t1 = a.start_angle + a.sweep;
  const double r = a.radius;
  return 0.5 * (r * r * a.sweep + r * a.center.x * (std::sin(t1) - std::sin(t0)) -
                r * a.center.y * (std::cos(t1) - std::cos(t0)));
}

Edge Edge::reversed() const {
  if (const auto* s = std::get_if<Segment>(&geom_)) return Edge(Segment{s->to, s->from});
  const auto& a = std::get<Arc>(geom_);
  return Edge(Arc{a.center, a.radius, a.start_angle + a.sweep, -a.sweep});
}

std::pair<Edge, Edge> Edge::split(double s) const {
  if (const auto* seg = std::get_if<Segment>(&geom_)) {
    const Vec2 mid = point_at(s);
    return {Edge(Segment{seg->from, mid}), Edge(Segment{mid, seg->to})};
  }
  const auto& a = std::get<Arc>(geom_);
  const double first = (a.sweep > 0.0 ? 1.0 : -1.0) * s / a.radius;
  return {Edge(Arc{a.center, a.radius, a.start_angle, first}),
          Edge(Arc{a.center, a.radius, a.start_angle + first, a.sweep - first})};
}

// ---------------------------------------------------------------------------
// Edge intersection

namespace {

void add_point(std::vector<Vec2>& pts, Vec2 p) {
  for (const Vec2& q : pts)
    if (near(p, q, kContactTol)) return;
  pts.push_back(p);
}

EdgeIntersection intersect_segments(const Segment& a, const Segment& b) {
  EdgeIntersection out;
  const Vec2 r = a.to - a.from;
  const Vec2 s = b.to - b.from;
  const double denom = cross(r, s);
  const double lr = norm(r);
  const double ls = norm(s);
  const Vec2 qp = b.from - a.from;
  if (std::abs(denom) <= 1e-14 * lr * ls) {
    // Parallel. Only collinear pieces can touch.
    if (std::abs(cross(qp, r)) / lr > kContactTol) return out;
    const double t0 = dot(qp, r) / (lr * lr);
    const double t1 = dot(b.to - a.from, r) / (lr * lr);
    const double lo = std::max(0.0, std::min(t0, t1));
    const double hi = std::min(1.0, std::max(t0, t1));
    if ((hi - lo) * lr > kContactTol) {
      out.overlap = true;
    } else if (hi - lo >= -kContactTol / lr) {
      add_point(out.points, a.from + 0.5 * (lo + hi) * r);
    }
    return out;
  }
  const double t = cross(qp, s) / denom;
  const double u = cross(qp, r) / denom;
  const double tt = kContactTol / lr;
  const double tu = kContactTol / ls;
  if (t >= -tt && t <= 1.0 + tt && u >= -tu && u <= 1.0 + tu) {
    add_point(out.points, a.from + std::clamp(t, 0.0, 1.0) * r);
  }
  return out;
}

EdgeIntersection intersect_segment_arc(const Segment& s, const Arc& a) {
  EdgeIntersection out;
  const Vec2 d = s.to - s.from;
  const double len = norm(d);
  const Vec2 f = s.from - a.center;
  // |f + t d|^2 = R^2
  const double qa = dot(d, d);
  const double qb = 2.0 * dot(f, d);
  const double qc = dot(f, f) - a.radius * a.radius;
  double disc = qb * qb - 4.0 * qa * qc;
  // Distance from the center to the line, to recognise tangential contact.
  const double line_dist = std::abs(cross(d, f)) / len;
  if (disc < 0.0) {
    if (std::abs(line_dist - a.radius) > kContactTol) return out;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double angle_tol = kContactTol / a.radius;
  for (double t : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
    if (t < -kContactTol / len || t > 1.0 + kContactTol / len) continue;
    const Vec2 p = s.from + std::clamp(t, 0.0, 1.0) * d;
    const Vec2 rel = p - a.center;
    if (in_arc_range(a, std::atan2(rel.y, rel.x), angle_tol)) add_point(out.points, p);
  }
  return out;
}

EdgeIntersection intersect_arcs(const Arc& a, const Arc& b) {
  EdgeIntersection out;
  const Vec2 dc = b.center - a.center;
  const double dist = norm(dc);
  const double tol_a = kContactTol / a.radius;
  const double tol_b = kContactTol / b.radius;
  if (dist <= kCoincidenceTol && std::abs(a.radius - b.radius) <= kCoincidenceTol) {
    // Same circle: compare angular intervals.
    const double a_len = std::abs(a.sweep);
    const double a_lo = a.sweep > 0.0 ? a.start_angle : a.start_angle + a.sweep;
    const double b_lo = b.sweep > 0.0 ? b.start_angle : b.start_angle + b.sweep;
    const double b_len = std::abs(b.sweep);
    // Overlap length of two arcs of the circle, considering wrap-around.
    double overlap = 0.0;
    for (double shift : {-kTwoPi, 0.0, kTwoPi}) {
      const double off = wrap_two_pi(b_lo - a_lo) + shift;
      const double lo = std::max(0.0, off);
      const double hi = std::min(a_len, off + b_len);
      overlap = std::max(overlap, hi - lo);
    }
    if (overlap * a.radius > kContactTol) {
      out.overlap = true;
      return out;
    }
    const Edge ea = Edge::arc_with_sweep(a.center, a.radius, a.start_angle, a.sweep);
    const Edge eb = Edge::arc_with_sweep(b.center, b.radius, b.start_angle, b.sweep);
    for (Vec2 p : {ea.start(), ea.end()})
      for (Vec2 q : {eb.start(), eb.end()})
        if (near(p, q, kContactTol)) add_point(out.points, p);
    return out;
  }
  if (dist <= kCoincidenceTol) return out;  // concentric, distinct radii
  if (dist > a.radius + b.radius + kContactTol) return out;
  if (dist < std::abs(a.radius - b.radius) - kContactTol) return out;
  const double x = (dist * dist + a.radius * a.radius - b.radius * b.radius) / (2.0 * dist);
  const double h = std::sqrt(std::max(0.0, a.radius * a.radius - x * x));
  const Vec2 ex = dc / dist;
  const Vec2 ey{-ex.y, ex.x};
  for (double sign : {-1.0, 1.0}) {
    const Vec2 p = a.center + x * ex + sign * h * ey;
    const Vec2 ra = p - a.center;
    const Vec2 rb = p - b.center;
    if (in_arc_range(a, std::atan2(ra.y, ra.x), tol_a) &&
        in_arc_range(b, std::atan2(rb.y, rb.x), tol_b))
      add_point(out.points, p);
  }
  return out;
}

}  // namespace

EdgeIntersection intersect(const Edge& a, const Edge& b) {
  if (!a.is_arc() && !b.is_arc()) return intersect_segments(a.as_segment(), b.as_segment());
  if (!a.is_arc()) return intersect_segment_arc(a.as_segment(), b.as_arc());
  if (!b.is_arc()) return intersect_segment_arc(b.as_segment(), a.as_arc());
  return intersect_arcs(a.as_arc(), b.as_arc());
}

// ---------------------------------------------------------------------------
// Loops

namespace {

// Ray direction for crossing parity; irrational slope so that rays from
// lattice points never pass through lattice vertices.
const Vec2 kRayDir = unit(0.5377521321);

int ray_crossings(const Edge& e, Vec2 p) {
  int count = 0;
  if (!e.is_arc()) {
    const auto& s = e.as_segment();
    const Vec2 d = s.to - s.from;
    const double denom = cross(kRayDir, d);
    if (denom == 0.0) return 0;
    const Vec2 qp = s.from - p;
    const double t = cross(qp, d) / denom;
    const double u = cross(qp, kRayDir) / denom;
    if (t > 0.0 && u >= 0.0 && u < 1.0) ++count;
    return count;
  }
  const auto& a = e.as_arc();
  const Vec2 f = p - a.center;
  const double qb = 2.0 * dot(f, kRayDir);
  const double qc = dot(f, f) - a.radius * a.radius;
  const double disc = qb * qb - 4.0 * qc;
  if (disc <= 0.0) return 0;
  const double sq = std::sqrt(disc);
  for (double t : {(-qb - sq) / 2.0, (-qb + sq) / 2.0}) {
    if (t <= 0.0) continue;
    const Vec2 rel = f + t * kRayDir;
    const double off = arc_offset(a, std::atan2(rel.y, rel.x));
    if (off < std::abs(a.sweep)) ++count;
  }
  return count;
}

bool inside_loop(const EdgeChain& loop, Vec2 p) {
  int count = 0;
  for (const Edge& e : loop) count += ray_crossings(e, p);
  return (count % 2) == 1;
}

double chain_length(const EdgeChain& chain) {
  double total = 0.0;
  for (const Edge& e : chain) total += e.length();
  return total;
}

EdgeChain reversed_chain(const EdgeChain& chain) {
  EdgeChain out;
  out.reserve(chain.size());
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) out.push_back(it->reversed());
  return out;
}

void require_connected(const EdgeChain& chain, const std::string& what, bool closed) {
  if (chain.empty()) throw GeometryError(what + " has no edges");
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    if (!near(chain[i].end(), chain[i + 1].start()))
      throw GeometryError(what + " is not connected: gap after edge " + std::to_string(i) +
                          " at " + fmt_point(chain[i].end()));
  }
  if (closed && !near(chain.back().end(), chain.front().start()))
    throw GeometryError(what + " is not closed: gap at " + fmt_point(chain.back().end()));
}

double region_distance_to_loops(const Component& c, Vec2 p, std::size_t* loop_index,
                                std::size_t* edge_index) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t l = 0; l <= c.holes.size(); ++l) {
    const EdgeChain& loop = l == 0 ? c.outer : c.holes[l - 1];
    for (std::size_t i = 0; i < loop.size(); ++i) {
      const double d = loop[i].distance(p);
      if (d < best) {
        best = d;
        *loop_index = l;
        *edge_index = i;
      }
    }
  }
  return best;
}

EdgeChain& loop_at(Component& c, std::size_t l) { return l == 0 ? c.outer : c.holes[l - 1]; }

// Ensures a vertex exists at p on loop l, splitting an edge if needed.
void insert_vertex(Component& c, std::size_t l, std::size_t edge_index, Vec2 p) {
  EdgeChain& loop = loop_at(c, l);
  const Edge& e = loop[edge_index];
  const double s = e.project(p);
  if (s <= kCoincidenceTol || s >= e.length() - kCoincidenceTol) return;
  auto [first, second] = e.split(s);
  loop[edge_index] = first;
  loop.insert(loop.begin() + static_cast<std::ptrdiff_t>(edge_index) + 1, second);
}

struct EdgeRef {
  const Edge* edge;
  std::size_t component;
};

void classify_open_chain(const EdgeChain& chain, bool closed, std::vector<IrregularPoint>& out) {
  const std::size_t n = chain.size();
  const std::size_t vertices = closed ? n : n - 1;
  for (std::size_t k = 0; k < vertices; ++k) {
    const Edge& in = chain[k];
    const Edge& next = chain[(k + 1) % n];
    const double beta = unsigned_angle(in.end_tangent(), next.start_tangent());
    if (beta <= kAngleTol) continue;
    if (beta >= kPi - kAngleTol)
      throw GeometryError("excluded configuration: cusp on a curve at " + fmt_point(in.end()));
    out.push_back({in.end(), IrregularKind::angle, {beta}, signed_angle(in.end_tangent(), next.start_tangent())});
  }
}

}  // namespace

double loop_turning_sum(const EdgeChain& loop) {
  double total = 0.0;
  const std::size_t n = loop.size();
  for (std::size_t i = 0; i < n; ++i) {
    total += loop[i].turning();
    total += signed_angle(loop[i].end_tangent(), loop[(i + 1) % n].start_tangent());
  }
  return total;
}

double signed_area(const EdgeChain& loop) {
  double total = 0.0;
  for (const Edge& e : loop) total += e.green_area();
  return total;
}

std::string_view to_string(IrregularKind kind) {
  switch (kind) {
    case IrregularKind::convex_binary: return "convex-binary";
    case IrregularKind::concave_binary: return "concave-binary";
    case IrregularKind::angle: return "angle";
    case IrregularKind::concave_ternary: return "concave-ternary";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// PlanarSet

std::vector<double> PlanarSet::concave_angles() const {
  std::vector<double> out;
  for (const auto& p : irregular_) out.insert(out.end(), p.betas.begin(), p.betas.end());
  return out;
}

double PlanarSet::area() const {
  double total = 0.0;
  for (const auto& c : components_) {
    if (c.kind != ComponentKind::region) continue;
    total += signed_area(c.outer);
    for (const auto& h : c.holes) total += signed_area(h);  // holes are clockwise
  }
  return total;
}

bool PlanarSet::in_interior(Vec2 p) const {
  for (const auto& c : components_) {
    if (c.kind != ComponentKind::region || !inside_loop(c.outer, p)) continue;
    bool in_hole = false;
    for (const auto& h : c.holes) {
      if (inside_loop(h, p)) {
        in_hole = true;
        break;
      }
    }
    if (!in_hole) return true;
  }
  return false;
}

double PlanarSet::distance(Vec2 p) const {
  if (in_interior(p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  auto scan = [&](const EdgeChain& chain) {
    for (const Edge& e : chain) best = std::min(best, e.distance(p));
  };
  for (const auto& c : components_) {
    switch (c.kind) {
      case ComponentKind::point:
        best = std::min(best, norm(p - c.point));
        break;
      case ComponentKind::curve:
        scan(c.curve);
        break;
      case ComponentKind::region:
        scan(c.outer);
        for (const auto& h : c.holes) scan(h);
        for (const auto& w : c.whiskers) scan(w);
        break;
    }
  }
  return best;
}

std::pair<Vec2, Vec2> PlanarSet::bounding_box() const {
  const double inf = std::numeric_limits<double>::infinity();
  Vec2 lo{inf, inf};
  Vec2 hi{-inf, -inf};
  auto grow = [&](Vec2 p) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  };
  auto scan = [&](const EdgeChain& chain) {
    for (const Edge& e : chain) {
      grow(e.start());
      grow(e.end());
      if (e.is_arc()) {
        const Arc& a = e.as_arc();
        for (int q = 0; q < 4; ++q) {
          const double ang = q * kPi / 2.0;
          if (in_arc_range(a, ang)) grow(arc_point(a, ang));
        }
      }
    }
  };
  for (const auto& c : components_) {
    if (c.kind == ComponentKind::point) grow(c.point);
    scan(c.outer);
    scan(c.curve);
    for (const auto& w : c.whiskers) scan(w);
  }
  return {lo, hi};
}

// ---------------------------------------------------------------------------
// Validation

PlanarSet validate_set(const SetDescription& description) {
  if (description.components.empty()) throw GeometryError("geometry has no components");

  PlanarSet set;
  for (std::size_t ci = 0; ci < description.components.size(); ++ci) {
    const auto& d = description.components[ci];
    const std::string tag = "component " + std::to_string(ci);
    const int kinds = int(!d.outer.empty()) + int(!d.curve.empty()) + int(d.point.has_value());
    if (kinds != 1)
      throw GeometryError(tag + " must have exactly one of an outer boundary, a curve, or a point");
    if ((!d.holes.empty() || !d.whiskers.empty()) && d.outer.empty())
      throw GeometryError(tag + ": holes and whiskers require an outer boundary");

    Component c;
    if (d.point) {
      if (!is_finite(*d.point)) throw GeometryError(tag + ": point is not finite");
      c.kind = ComponentKind::point;
      c.point = *d.point;
    } else if (!d.curve.empty()) {
      require_connected(d.curve, tag + " curve", false);
      c.kind = ComponentKind::curve;
      c.curve = d.curve;
      c.closed_curve = near(d.curve.back().end(), d.curve.front().start());
    } else {
      c.kind = ComponentKind::region;
      require_connected(d.outer, tag + " outer boundary", true);
      c.outer = signed_area(d.outer) > 0.0 ? d.outer : reversed_chain(d.outer);
      for (std::size_t h = 0; h < d.holes.size(); ++h) {
        require_connected(d.holes[h], tag + " hole " + std::to_string(h), true);
        c.holes.push_back(signed_area(d.holes[h]) < 0.0 ? d.holes[h] : reversed_chain(d.holes[h]));
      }
      for (std::size_t w = 0; w < d.whiskers.size(); ++w) {
        const std::string wtag = tag + " whisker " + std::to_string(w);
        require_connected(d.whiskers[w], wtag, false);
        EdgeChain chain = d.whiskers[w];
        std::size_t l0 = 0, e0 = 0, l1 = 0, e1 = 0;
        const bool on_start = region_distance_to_loops(c, chain.front().start(), &l0, &e0) <= kCoincidenceTol;
        const bool on_end = region_distance_to_loops(c, chain.back().end(), &l1, &e1) <= kCoincidenceTol;
        if (on_start && on_end)
          throw GeometryError(wtag + " is not attached per the set definition: both ends touch the boundary");
        if (!on_start && !on_end)
          throw GeometryError(wtag + " is not attached per the set definition: no end touches the boundary");
        if (on_end) {
          chain = reversed_chain(chain);
          l0 = l1;
          e0 = e1;
        }
        insert_vertex(c, l0, e0, chain.front().start());
        c.whiskers.push_back(std::move(chain));
      }
    }
    set.components_.push_back(std::move(c));
  }

  // Pairwise intersections: only shared chain vertices may touch.
  std::vector<EdgeRef> edges;
  std::vector<Vec2> ends;
  for (std::size_t ci = 0; ci < set.components_.size(); ++ci) {
    const auto& c = set.components_[ci];
    auto add = [&](const EdgeChain& chain) {
      for (const Edge& e : chain) {
        edges.push_back({&e, ci});
        ends.push_back(e.start());
        ends.push_back(e.end());
      }
    };
    add(c.outer);
    for (const auto& h : c.holes) add(h);
    for (const auto& w : c.whiskers) add(w);
    add(c.curve);
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size(); ++j) {
      const Edge& a = *edges[i].edge;
      const Edge& b = *edges[j].edge;
      const auto hit = intersect(a, b);
      if (hit.overlap) throw GeometryError("boundary curves overlap near " + fmt_point(a.start()));
      for (Vec2 p : hit.points) {
        bool shared = false;
        for (Vec2 ea : {a.start(), a.end()})
          for (Vec2 eb : {b.start(), b.end()})
            if (near(ea, eb) && near(p, ea, kContactTol)) shared = true;
        if (!shared) throw GeometryError("self-intersecting geometry: curves cross at " + fmt_point(p));
      }
    }
  }

  // Vertex orders.
  std::vector<Vec2> attach_points;
  for (const auto& c : set.components_)
    for (const auto& w : c.whiskers) attach_points.push_back(w.front().start());
  std::vector<bool> used(ends.size(), false);
  for (std::size_t i = 0; i < ends.size(); ++i) {
    if (used[i]) continue;
    int order = 0;
    for (std::size_t j = i; j < ends.size(); ++j) {
      if (!used[j] && near(ends[i], ends[j])) {
        used[j] = true;
        ++order;
      }
    }
    if (order >= 4)
      throw GeometryError("excluded configuration: vertex of order " + std::to_string(order) +
                          " at " + fmt_point(ends[i]));
    if (order == 3) {
      const bool is_attach = std::any_of(attach_points.begin(), attach_points.end(),
                                         [&](Vec2 q) { return near(q, ends[i]); });
      if (!is_attach)
        throw GeometryError("self-intersecting geometry: three curve ends meet at " + fmt_point(ends[i]));
    }
  }

  // Point components must stay clear of everything else.
  for (std::size_t ci = 0; ci < set.components_.size(); ++ci) {
    const auto& c = set.components_[ci];
    if (c.kind != ComponentKind::point) continue;
    for (const auto& e : edges)
      if (e.edge->distance(c.point) <= kCoincidenceTol)
        throw GeometryError("point component touches another component at " + fmt_point(c.point));
    for (std::size_t cj = 0; cj < set.components_.size(); ++cj)
      if (cj != ci && set.components_[cj].kind == ComponentKind::point &&
          near(set.components_[cj].point, c.point))
        throw GeometryError("duplicate point component at " + fmt_point(c.point));
  }

  // Containment.
  auto representative = [](const Component& c) {
    switch (c.kind) {
      case ComponentKind::point: return c.point;
      case ComponentKind::curve: return c.curve.front().point_at(0.5 * c.curve.front().length());
      case ComponentKind::region: break;
    }
    return c.outer.front().point_at(0.5 * c.outer.front().length());
  };
  for (std::size_t ci = 0; ci < set.components_.size(); ++ci) {
    const auto& c = set.components_[ci];
    if (c.kind != ComponentKind::region) continue;
    for (std::size_t h = 0; h < c.holes.size(); ++h) {
      const Vec2 p = representative(Component{ComponentKind::region, c.holes[h], {}, {}, {}, false, {}});
      if (!inside_loop(c.outer, p))
        throw GeometryError("component " + std::to_string(ci) + " hole " + std::to_string(h) +
                            " lies outside the outer boundary");
      for (std::size_t g = 0; g < c.holes.size(); ++g)
        if (g != h && inside_loop(c.holes[g], p))
          throw GeometryError("component " + std::to_string(ci) + " has nested holes");
    }
    for (std::size_t cj = 0; cj < set.components_.size(); ++cj) {
      if (cj == ci) continue;
      const Vec2 p = representative(set.components_[cj]);
      bool inside = inside_loop(c.outer, p);
      for (const auto& h : c.holes)
        if (inside_loop(h, p)) inside = false;
      if (inside)
        throw GeometryError("component " + std::to_string(cj) + " lies inside the interior of component " +
                            std::to_string(ci));
    }
    for (std::size_t w = 0; w < c.whiskers.size(); ++w) {
      for (const Edge& e : c.whiskers[w]) {
        for (Vec2 p : {e.point_at(0.5 * e.length()), e.end()}) {
          if (set.in_interior(p))
            throw GeometryError("component " + std::to_string(ci) + " whisker " + std::to_string(w) +
                                " is not attached per the set definition: it enters the interior");
        }
      }
    }
  }

  // Classification and the turning identity.
  for (std::size_t ci = 0; ci < set.components_.size(); ++ci) {
    const auto& c = set.components_[ci];
    if (c.kind == ComponentKind::curve) {
      classify_open_chain(c.curve, c.closed_curve, set.irregular_);
      continue;
    }
    if (c.kind != ComponentKind::region) continue;
    for (std::size_t l = 0; l <= c.holes.size(); ++l) {
      const EdgeChain& loop = l == 0 ? c.outer : c.holes[l - 1];
      const double expected = l == 0 ? kTwoPi : -kTwoPi;
      if (std::abs(loop_turning_sum(loop) - expected) > 1e-6)
        throw GeometryError("component " + std::to_string(ci) + " boundary loop is not simple");
      const std::size_t n = loop.size();
      for (std::size_t i = 0; i < n; ++i) {
        const Edge& in = loop[(i + n - 1) % n];
        const Edge& out = loop[i];
        const Vec2 v = out.start();
        const Vec2 t_in = in.end_tangent();
        const Vec2 t_out = out.start_tangent();
        const double turn = signed_angle(t_in, t_out);
        if (kPi - std::abs(turn) <= kAngleTol)
          throw GeometryError("excluded configuration: cusp on a boundary at " + fmt_point(v));
        const EdgeChain* whisker = nullptr;
        for (const auto& w : c.whiskers)
          if (near(w.front().start(), v)) whisker = &w;
        if (whisker) {
          const Vec2 d3 = whisker->front().start_tangent();
          const double b1 = unsigned_angle(t_in, d3);
          const double b2 = unsigned_angle(-d3, t_out);
          if (b1 >= kPi - kAngleTol || b2 >= kPi - kAngleTol || b1 + b2 > kPi + kAngleTol)
            throw GeometryError("excluded configuration: ternary point at " + fmt_point(v) +
                                " has beta1 + beta2 > pi");
          set.irregular_.push_back({v, IrregularKind::concave_ternary, {b1, b2}, turn});
          continue;
        }
        if (std::abs(turn) <= kAngleTol) continue;
        if (turn > 0.0) {
          set.irregular_.push_back({v, IrregularKind::convex_binary, {}, turn});
        } else {
          set.irregular_.push_back({v, IrregularKind::concave_binary, {-turn}, turn});
        }
      }
    }
    for (const auto& w : c.whiskers) classify_open_chain(w, false, set.irregular_);
  }
  return set;
}

// ---------------------------------------------------------------------------
// Coefficients

int euler_characteristic(const PlanarSet& set) {
  int chi = 0;
  for (const auto& c : set.components()) {
    switch (c.kind) {
      case ComponentKind::region: chi += 1 - static_cast<int>(c.holes.size()); break;
      case ComponentKind::curve: chi += c.closed_curve ? 0 : 1; break;
      case ComponentKind::point: chi += 1; break;
    }
  }
  return chi;
}

double outer_minkowski_content(const PlanarSet& set) {
  double total = 0.0;
  for (const auto& c : set.components()) {
    total += chain_length(c.outer);
    for (const auto& h : c.holes) total += chain_length(h);
    for (const auto& w : c.whiskers) total += 2.0 * chain_length(w);
    total += 2.0 * chain_length(c.curve);
  }
  return total;
}

double concavity_summand(double beta) { return 0.5 * beta - std::tan(0.5 * beta); }

double concavity_correction(const PlanarSet& set) {
  double total = 0.0;
  for (double beta : set.concave_angles()) total += concavity_summand(beta);
  return total / kPi;
}

SteinerCoeffs2D steiner_coefficients_2d(const PlanarSet& set) {
  return {set.area(), outer_minkowski_content(set),
          euler_characteristic(set) + concavity_correction(set), Provenance::exact};
}

SteinerCoeffs2D glue_coefficients(const GluingInput& in) {
  SteinerCoeffs2D out;
  double part_area = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    out.l1 += in.unions[i].l1 - in.parts[i].l1;
    out.l0 += in.unions[i].l0 - in.parts[i].l0;
    part_area += in.parts[i].sigma2;
  }
  out.l0 += (in.c123 - in.c13) / kPi;
  out.sigma2 = in.sigma2.value_or(part_area);
  out.provenance = Provenance::exact;
  return out;
}

IntersectionConstants intersection_tube_constants(double beta) {
  if (!(beta >= 0.0 && beta < kPi)) throw std::domain_error("concave angle must lie in [0, pi)");
  const double t = std::tan(0.5 * beta);
  return {(kPi - beta) + 2.0 * t, (kPi - beta) + 0.5 * beta + t};
}

IntersectionConstants intersection_tube_constants(const IrregularPoint& vertex) {
  if (vertex.kind != IrregularKind::concave_binary && vertex.kind != IrregularKind::angle)
    throw std::invalid_argument("tube intersection constants need a concave binary or angle point");
  return intersection_tube_constants(vertex.betas.at(0));
}

TangentPairArea tangent_pair_intersection_area(double radius, double eps) {
  if (!(radius > 0.0)) throw std::domain_error("radius must be positive");
  if (!(eps >= 0.0) || eps >= radius) throw std::domain_error("eps must lie in [0, R)");
  const double re = std::sqrt(radius * eps);
  const double exact = 0.5 * kPi * eps * eps +
                       0.5 * (radius + eps) * (radius + eps) * std::asin(2.0 * re / (radius + eps)) -
                       (radius - eps) * re;
  const double asymptotic = 0.5 * kPi * eps * eps + (8.0 / 3.0) * std::sqrt(radius) * eps * std::sqrt(eps);
  return {exact, asymptotic};
}

}  // namespace gausstail
