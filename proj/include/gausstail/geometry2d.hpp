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

// Planar sets with piecewise-C2 boundary (segments and circular arcs), their
// irregular-point classification, and the exact tube-formula coefficients
// (area, outer Minkowski content, and the Euler characteristic corrected by
// the concave angles).

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace gausstail {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline Vec2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Angle in (-pi, pi] that rotates direction a onto direction b.
inline double signed_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }
// Angle in [0, pi] between directions a and b.
inline double unsigned_angle(Vec2 a, Vec2 b) { return std::abs(signed_angle(a, b)); }

// Points closer than this are the same vertex.
inline constexpr double kCoincidenceTol = 1e-9;
// Tangent discontinuities below this are treated as smooth joins.
inline constexpr double kAngleTol = 1e-9;

// Invalid or excluded geometry. The message is user-facing.
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Segment {
  Vec2 from;
  Vec2 to;
};

// Circular arc starting at center + radius * unit(start_angle) and sweeping
// through `sweep` radians; positive sweep is counter-clockwise travel.
struct Arc {
  Vec2 center;
  double radius = 0.0;
  double start_angle = 0.0;
  double sweep = 0.0;
};

// One C2 piece of a boundary curve, oriented in its direction of travel.
class Edge {
 public:
  static Edge segment(Vec2 from, Vec2 to);
  static Edge arc(Vec2 center, double radius, double from_angle, double to_angle, bool ccw);
  static Edge arc_with_sweep(Vec2 center, double radius, double start_angle, double sweep);

  bool is_arc() const noexcept { return std::holds_alternative<Arc>(geom_); }
  const Segment& as_segment() const { return std::get<Segment>(geom_); }
  const Arc& as_arc() const { return std::get<Arc>(geom_); }

  Vec2 start() const;
  Vec2 end() const;
  // Unit tangents in the direction of travel.
  Vec2 start_tangent() const;
  Vec2 end_tangent() const;
  Vec2 point_at(double arc_length) const;
  Vec2 tangent_at(double arc_length) const;

  double length() const;
  // Signed curvature C(t): 0 on segments, +1/R on left-turning arcs.
  double curvature() const;
  // Integral of the signed curvature along the edge.
  double turning() const;
  double distance(Vec2 p) const;
  // Arc-length parameter of the point of the edge closest to p.
  double project(Vec2 p) const;
  // Contribution to the signed enclosed area, (1/2) * integral of (x dy - y dx).
  double green_area() const;

  Edge reversed() const;
  std::pair<Edge, Edge> split(double arc_length) const;

 private:
  explicit Edge(std::variant<Segment, Arc> geom) : geom_(geom) {}
  std::variant<Segment, Arc> geom_;
};

using EdgeChain = std::vector<Edge>;

// Intersection of two edges. `overlap` is set when they share a curve piece of
// positive length, in which case `points` is not meaningful.
struct EdgeIntersection {
  std::vector<Vec2> points;
  bool overlap = false;
};
EdgeIntersection intersect(const Edge& a, const Edge& b);

// Raw geometry as read from input, before validation. A component has either
// an outer boundary (with optional holes and whiskers), a single open or
// closed curve, or a single point.
struct ComponentDescription {
  EdgeChain outer;
  std::vector<EdgeChain> holes;
  std::vector<EdgeChain> whiskers;
  EdgeChain curve;
  std::optional<Vec2> point;
};

struct SetDescription {
  std::vector<ComponentDescription> components;
};

enum class IrregularKind { convex_binary, concave_binary, angle, concave_ternary };
std::string_view to_string(IrregularKind kind);

struct IrregularPoint {
  Vec2 location;
  IrregularKind kind = IrregularKind::convex_binary;
  // Concave angles in [0, pi): one for concave binary and angle points, two
  // for ternary points, none for convex binary points.
  std::vector<double> betas;
  // Signed tangent turn across the vertex for binary points; for ternary
  // points the turn between the two boundary edges.
  double turning = 0.0;
};

enum class ComponentKind { region, curve, point };

struct Component {
  ComponentKind kind = ComponentKind::region;
  EdgeChain outer;                  // counter-clockwise, interior on the left
  std::vector<EdgeChain> holes;     // clockwise, interior on the left
  std::vector<EdgeChain> whiskers;  // first edge starts at the attachment point
  EdgeChain curve;
  bool closed_curve = false;
  Vec2 point;
};

// A validated set. Only validate_set constructs one.
class PlanarSet {
 public:
  const std::vector<Component>& components() const noexcept { return components_; }
  const std::vector<IrregularPoint>& irregular_points() const noexcept { return irregular_; }

  std::vector<double> concave_angles() const;
  double area() const;
  // True for points inside some outer boundary and outside all of its holes.
  // Points within rounding of the boundary may go either way.
  bool in_interior(Vec2 p) const;
  // Euclidean distance to the closed set (0 on the interior).
  double distance(Vec2 p) const;
  std::pair<Vec2, Vec2> bounding_box() const;

 private:
  friend PlanarSet validate_set(const SetDescription& description);
  std::vector<Component> components_;
  std::vector<IrregularPoint> irregular_;
};

// Checks the description and classifies every irregular point. Throws
// GeometryError for malformed or excluded configurations.
PlanarSet validate_set(const SetDescription& description);

// Sum of the vertex tangent turns plus the integrated curvature of a closed
// loop; +2pi for a counter-clockwise simple loop, -2pi for a clockwise one.
double loop_turning_sum(const EdgeChain& loop);
double signed_area(const EdgeChain& loop);

int euler_characteristic(const PlanarSet& set);
double outer_minkowski_content(const PlanarSet& set);

// beta/2 - tan(beta/2): the non-convexity contribution of one concave angle.
double concavity_summand(double beta);
double concavity_correction(const PlanarSet& set);

enum class Provenance { exact, fitted };

struct SteinerCoeffs2D {
  double sigma2 = 0.0;  // area
  double l1 = 0.0;      // outer Minkowski content
  double l0 = 0.0;      // coefficient of pi*eps^2; may be negative
  Provenance provenance = Provenance::exact;
};

SteinerCoeffs2D steiner_coefficients_2d(const PlanarSet& set);

// Gluing four SFH pieces S1..S4 into their union. `unions` holds the
// coefficients of S1uS2, S2uS3, S3uS4, S4uS1 in that order. Empty pieces use
// all-zero coefficients. When sigma2 is absent the union's area is the sum of
// the part areas (disjoint interiors).
struct GluingInput {
  std::array<SteinerCoeffs2D, 4> parts;
  std::array<SteinerCoeffs2D, 4> unions;
  double c13 = 0.0;
  double c123 = 0.0;
  std::optional<double> sigma2;
};
SteinerCoeffs2D glue_coefficients(const GluingInput& input);

// eps^-2 * area of the pairwise and triple tube intersections at a concave
// vertex decomposed by prolonging its two tangents.
struct IntersectionConstants {
  double c13 = 0.0;
  double c123 = 0.0;
};
IntersectionConstants intersection_tube_constants(double beta);
IntersectionConstants intersection_tube_constants(const IrregularPoint& vertex);

// Area of the intersection of the eps-tubes of a circle of radius R and a
// segment tangent to it, and its two-term small-eps expansion.
struct TangentPairArea {
  double exact = 0.0;
  double asymptotic = 0.0;
};
TangentPairArea tangent_pair_intersection_area(double radius, double eps);

}  // namespace gausstail
