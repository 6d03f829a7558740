#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

// 2-D box and convex-polygon geometry for oriented object detection.
//
// Coordinate convention is the image one: x grows right, y grows DOWN.
// Polygons are stored with positive shoelace sign, which under this
// convention is the visually-clockwise order; in literal coordinates it
// is the mathematically counterclockwise orientation.

namespace obdet {

// Tolerance used by geometric consistency checks, in normalized units.
// Checks against absolute coordinates scale it by the shape extent.
inline constexpr double k_geom_eps = 1e-7;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(Point a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a);
bool is_finite(Point a);

// Axis-aligned box given by center and strictly positive extents.
struct AxisBox {
  double cx = 0.0;
  double cy = 0.0;
  double w = 0.0;
  double h = 0.0;

  AxisBox() = default;
  AxisBox(double cx, double cy, double w, double h);
  static AxisBox from_corners(double x_min, double y_min, double x_max,
                              double y_max);

  double x_min() const { return cx - 0.5 * w; }
  double x_max() const { return cx + 0.5 * w; }
  double y_min() const { return cy - 0.5 * h; }
  double y_max() const { return cy + 0.5 * h; }
  double area() const { return w * h; }
  // Corners in clockwise image order starting at the top-left.
  std::array<Point, 4> corners() const;
  bool contains(Point p, double tol = 0.0) const;
};

// Convex polygon, vertices in positive-shoelace order. Collinear or
// repeated-up-to-tolerance vertices are tolerated so that clip results
// remain representable; a fully degenerate polygon has zero area.
class ConvexPolygon {
 public:
  // Validates orientation and convexity (within tolerance); throws
  // std::invalid_argument otherwise.
  static ConvexPolygon from_vertices(std::vector<Point> vertices);
  // Builds the convex hull of arbitrary points; requires at least 3
  // non-collinear points.
  static ConvexPolygon hull_of(std::span<const Point> points);

  std::span<const Point> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }

 private:
  explicit ConvexPolygon(std::vector<Point> vertices)
      : vertices_(std::move(vertices)) {}
  std::vector<Point> vertices_;
};

// Rotated rectangle stored as 4 vertices in clockwise image order.
// Vertex 0 is the corner with smallest y (ties broken by smallest x),
// i.e. the topmost corner of the upper side.
class OrientedBox {
 public:
  // Accepts the 4 corners in any order, sorts them into the canonical
  // cycle and validates rectangle shape within tolerance.
  static OrientedBox from_vertices(const std::array<Point, 4>& corners);
  static OrientedBox axis_aligned(const AxisBox& box);

  const std::array<Point, 4>& vertices() const { return vertices_; }
  Point center() const;
  double area() const;
  // Side lengths: side(0) is the edge from vertex 0 to vertex 1.
  double side(int i) const;
  double longest_side() const;
  double shortest_side() const;
  double aspect() const;  // longest / shortest, infinity when degenerate
  bool degenerate() const;
  ConvexPolygon to_polygon() const;

 private:
  friend OrientedBox make_oriented_box_from_cycle(const std::array<Point, 4>&);
  OrientedBox() = default;
  std::array<Point, 4> vertices_;
};

// (d1, d2, h) code of an OrientedBox relative to an enclosing AxisBox,
// every present field in [0, 1]. See encode_rbox for the convention.
struct RBoxCode {
  double d1 = 0.0;
  double d2 = 0.0;
  std::optional<double> h;
};

struct DecodedRBoxes {
  // One candidate when the code carries h, two (one per chirality) when
  // it does not.
  std::vector<OrientedBox> candidates;
  // Set when any candidate collapses to a thin or empty rectangle.
  bool degenerate = false;
};

// Shoelace area; zero for degenerate polygons, never negative for the
// stored orientation.
double polygon_area(const ConvexPolygon& p);
double signed_area(std::span<const Point> vertices);

double iou_axis(const AxisBox& a, const AxisBox& b);

// Intersection of two convex polygons via successive half-plane
// clipping against the clip polygon's edges. Empty when disjoint.
std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject,
                                         const ConvexPolygon& clip);

double iou_oriented(const OrientedBox& a, const OrientedBox& b);

// Minimum-area enclosing rectangle (calipers over hull edges). Throws
// std::invalid_argument when all points are collinear.
OrientedBox min_area_rect(const ConvexPolygon& polygon);
OrientedBox min_area_rect(std::span<const Point> points);

// Tightest axis-aligned box containing the rectangle.
AxisBox enclosing_axis_box(const OrientedBox& r);

// RBox code convention.
//
// The "upper side" of an inscribed rectangle is the side running from
// its leftmost vertex up to its topmost vertex. Chirality 1 anchors
// that side on the enclosing box: the first endpoint sits on the LEFT
// edge at depth d1*h_b below the top-left corner, the second on the TOP
// edge at offset d2*w_b right of it. Chirality 2 mirrors the layout:
// first endpoint on the TOP edge at d1*w_b, second on the RIGHT edge at
// d2*h_b below the top-right corner. h is the rectangle height divided
// by the maximal height that keeps the rectangle inside the box, so
// h = 1 selects the maximal inscribed rectangle.
//
// An axis-aligned box equal to its enclosing box encodes as (0, 0, 1);
// decode maps d1 = d2 = 0 back to the box itself.

// Encodes r against b. r must be inscribed in b: inside it, with the
// upper side anchored on b's left and top edges (always the case when
// b is the tight enclosing box). Throws std::invalid_argument when the
// input is inconsistent.
RBoxCode encode_rbox(const OrientedBox& r, const AxisBox& b);

// Decodes a code. With h present returns the single chirality-1
// rectangle of height h * h_max; with h absent returns both chirality
// candidates at maximal inscribed height. Degenerate thin results are
// flagged, not thrown.
DecodedRBoxes decode_rbox(const AxisBox& b, const RBoxCode& code);

}  // namespace obdet
