#include "obdet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace obdet {

namespace {

constexpr double k_inf = std::numeric_limits<double>::infinity();

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument(what);
}

double span_of(std::span<const Point> pts) {
  double lo_x = k_inf, hi_x = -k_inf, lo_y = k_inf, hi_y = -k_inf;
  for (const Point& p : pts) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  return std::max(hi_x - lo_x, hi_y - lo_y);
}

// Rotates the cycle so the vertex with smallest y (then smallest x)
// comes first, reversing beforehand if the shoelace sign is negative.
std::array<Point, 4> canonical_cycle(std::array<Point, 4> v) {
  if (signed_area(v) < 0.0) std::swap(v[1], v[3]);
  int start = 0;
  for (int i = 1; i < 4; ++i) {
    if (v[i].y < v[start].y ||
        (v[i].y == v[start].y && v[i].x < v[start].x)) {
      start = i;
    }
  }
  std::array<Point, 4> out;
  for (int i = 0; i < 4; ++i) out[i] = v[(start + i) % 4];
  return out;
}

}  // namespace

OrientedBox make_oriented_box_from_cycle(const std::array<Point, 4>& cycle);

double norm(Point a) { return std::hypot(a.x, a.y); }

bool is_finite(Point a) { return std::isfinite(a.x) && std::isfinite(a.y); }

AxisBox::AxisBox(double cx, double cy, double w, double h)
    : cx(cx), cy(cy), w(w), h(h) {
  if (!std::isfinite(cx) || !std::isfinite(cy) || !std::isfinite(w) ||
      !std::isfinite(h)) {
    fail("AxisBox: non-finite field");
  }
  if (w <= 0.0 || h <= 0.0) fail("AxisBox: extents must be positive");
}

AxisBox AxisBox::from_corners(double x_min, double y_min, double x_max,
                              double y_max) {
  if (!(x_min < x_max) || !(y_min < y_max)) {
    fail("AxisBox: corners do not span a box");
  }
  return AxisBox(0.5 * (x_min + x_max), 0.5 * (y_min + y_max), x_max - x_min,
                 y_max - y_min);
}

std::array<Point, 4> AxisBox::corners() const {
  return {Point{x_min(), y_min()}, Point{x_max(), y_min()},
          Point{x_max(), y_max()}, Point{x_min(), y_max()}};
}

bool AxisBox::contains(Point p, double tol) const {
  return p.x >= x_min() - tol && p.x <= x_max() + tol && p.y >= y_min() - tol &&
         p.y <= y_max() + tol;
}

double signed_area(std::span<const Point> v) {
  double sum = 0.0;
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& p = v[i];
    const Point& q = v[(i + 1) % n];
    sum += p.x * q.y - q.x * p.y;
  }
  return 0.5 * sum;
}

ConvexPolygon ConvexPolygon::from_vertices(std::vector<Point> vertices) {
  if (vertices.size() < 3) fail("ConvexPolygon: needs at least 3 vertices");
  for (const Point& p : vertices) {
    if (!is_finite(p)) fail("ConvexPolygon: non-finite vertex");
  }
  const double scale = std::max(span_of(vertices), 1e-300);
  const double tol = k_geom_eps * scale * scale;
  if (signed_area(vertices) < -tol) {
    fail("ConvexPolygon: vertices are clockwise in mathematical orientation");
  }
  const std::size_t n = vertices.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point& a = vertices[i];
    const Point& b = vertices[(i + 1) % n];
    const Point& c = vertices[(i + 2) % n];
    if (cross(b - a, c - b) < -tol) fail("ConvexPolygon: not convex");
  }
  return ConvexPolygon(std::move(vertices));
}

ConvexPolygon ConvexPolygon::hull_of(std::span<const Point> points) {
  std::vector<Point> pts(points.begin(), points.end());
  for (const Point& p : pts) {
    if (!is_finite(p)) fail("ConvexPolygon: non-finite point");
  }
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](Point a, Point b) { return a.x == b.x && a.y == b.y; }),
            pts.end());
  if (pts.size() < 3) fail("ConvexPolygon: needs 3 distinct points");

  // Andrew monotone chain; keeps left turns, drops collinear points.
  auto build = [&](auto begin, auto end) {
    std::vector<Point> chain;
    for (auto it = begin; it != end; ++it) {
      while (chain.size() >= 2 &&
             cross(chain.back() - chain[chain.size() - 2],
                   *it - chain.back()) <= 0.0) {
        chain.pop_back();
      }
      chain.push_back(*it);
    }
    return chain;
  };
  std::vector<Point> lower = build(pts.begin(), pts.end());
  std::vector<Point> upper = build(pts.rbegin(), pts.rend());
  lower.pop_back();
  upper.pop_back();
  lower.insert(lower.end(), upper.begin(), upper.end());
  if (lower.size() < 3) fail("ConvexPolygon: points are collinear");
  return ConvexPolygon(std::move(lower));
}

double polygon_area(const ConvexPolygon& p) {
  return std::max(0.0, signed_area(p.vertices()));
}

double iou_axis(const AxisBox& a, const AxisBox& b) {
  const double iw =
      std::min(a.x_max(), b.x_max()) - std::max(a.x_min(), b.x_min());
  const double ih =
      std::min(a.y_max(), b.y_max()) - std::max(a.y_min(), b.y_min());
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  return clamp01(inter / (a.area() + b.area() - inter));
}

namespace {

// Clips `input` against the half-plane left of the directed line a->b
// (the interior side for a positive-shoelace polygon). Vertices exactly
// on the line count as inside, so clipping a polygon against itself
// reproduces it bit for bit.
void clip_half_plane(const std::vector<Point>& input, Point a, Point b,
                     std::vector<Point>& output) {
  output.clear();
  const std::size_t n = input.size();
  if (n == 0) return;
  const Point edge = b - a;
  Point prev = input[n - 1];
  double prev_side = cross(edge, prev - a);
  for (std::size_t i = 0; i < n; ++i) {
    const Point cur = input[i];
    const double cur_side = cross(edge, cur - a);
    if (cur_side >= 0.0) {
      if (prev_side < 0.0 && cur_side > 0.0) {
        const double t = prev_side / (prev_side - cur_side);
        output.push_back(prev + (cur - prev) * t);
      }
      output.push_back(cur);
    } else if (prev_side > 0.0) {
      const double t = prev_side / (prev_side - cur_side);
      output.push_back(prev + (cur - prev) * t);
    }
    prev = cur;
    prev_side = cur_side;
  }
}

std::vector<Point> clip_vertices(std::span<const Point> subject,
                                 std::span<const Point> clip) {
  std::vector<Point> current(subject.begin(), subject.end());
  std::vector<Point> next;
  const std::size_t m = clip.size();
  for (std::size_t e = 0; e < m && !current.empty(); ++e) {
    clip_half_plane(current, clip[e], clip[(e + 1) % m], next);
    current.swap(next);
  }
  return current;
}

}  // namespace

std::optional<ConvexPolygon> clip_convex(const ConvexPolygon& subject,
                                         const ConvexPolygon& clip) {
  std::vector<Point> result = clip_vertices(subject.vertices(), clip.vertices());
  if (result.size() < 3) return std::nullopt;
  // Drop duplicate vertices produced by corner-touching intersections.
  const double tol =
      k_geom_eps * std::max(span_of(subject.vertices()), span_of(clip.vertices()));
  std::vector<Point> dedup;
  dedup.reserve(result.size());
  for (const Point& p : result) {
    if (dedup.empty() || norm(p - dedup.back()) > tol) dedup.push_back(p);
  }
  while (dedup.size() > 1 && norm(dedup.front() - dedup.back()) <= tol) {
    dedup.pop_back();
  }
  if (dedup.size() < 3) return std::nullopt;
  return ConvexPolygon::from_vertices(std::move(dedup));
}

OrientedBox make_oriented_box_from_cycle(const std::array<Point, 4>& cycle) {
  OrientedBox box;
  box.vertices_ = canonical_cycle(cycle);
  return box;
}

OrientedBox OrientedBox::from_vertices(const std::array<Point, 4>& corners) {
  for (const Point& p : corners) {
    if (!is_finite(p)) fail("OrientedBox: non-finite vertex");
  }
  // Order corners into a cycle by angle around the centroid, then
  // validate the rectangle shape.
  Point centroid{0.0, 0.0};
  for (const Point& p : corners) centroid = centroid + p * 0.25;
  std::array<Point, 4> cycle = corners;
  std::sort(cycle.begin(), cycle.end(), [&](Point a, Point b) {
    const double aa = std::atan2(a.y - centroid.y, a.x - centroid.x);
    const double ab = std::atan2(b.y - centroid.y, b.x - centroid.x);
    if (aa != ab) return aa < ab;
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });

  const Point e0 = cycle[1] - cycle[0];
  const Point e1 = cycle[2] - cycle[1];
  const Point e2 = cycle[3] - cycle[2];
  const Point e3 = cycle[0] - cycle[3];
  const double scale =
      std::max({norm(e0), norm(e1), norm(e2), norm(e3), 1e-300});
  const double tol = k_geom_eps * scale;
  if (norm(e0 + e2) > tol || norm(e1 + e3) > tol) {
    fail("OrientedBox: opposite sides not parallel and equal");
  }
  if (std::abs(dot(e0, e1)) > tol * scale) {
    fail("OrientedBox: adjacent sides not perpendicular");
  }
  return make_oriented_box_from_cycle(cycle);
}

OrientedBox OrientedBox::axis_aligned(const AxisBox& box) {
  return make_oriented_box_from_cycle(box.corners());
}

Point OrientedBox::center() const {
  Point c{0.0, 0.0};
  for (const Point& p : vertices_) c = c + p * 0.25;
  return c;
}

double OrientedBox::area() const {
  return std::max(0.0, signed_area(vertices_));
}

double OrientedBox::side(int i) const {
  return norm(vertices_[(i + 1) % 4] - vertices_[i]);
}

double OrientedBox::longest_side() const { return std::max(side(0), side(1)); }

double OrientedBox::shortest_side() const { return std::min(side(0), side(1)); }

double OrientedBox::aspect() const {
  const double s = shortest_side();
  if (s <= 0.0) return k_inf;
  return longest_side() / s;
}

bool OrientedBox::degenerate() const {
  const double scale = std::max(longest_side(), 1e-300);
  return shortest_side() <= k_geom_eps * scale;
}

ConvexPolygon OrientedBox::to_polygon() const {
  return ConvexPolygon::from_vertices(
      std::vector<Point>(vertices_.begin(), vertices_.end()));
}

double iou_oriented(const OrientedBox& a, const OrientedBox& b) {
  const auto& va = a.vertices();
  const auto& vb = b.vertices();
  std::vector<Point> inter_verts = clip_vertices(va, vb);
  const double inter =
      inter_verts.size() < 3 ? 0.0 : std::max(0.0, signed_area(inter_verts));
  if (inter <= 0.0) return 0.0;
  const double denom = a.area() + b.area() - inter;
  if (denom <= 0.0) return 1.0;
  return clamp01(inter / denom);
}

OrientedBox min_area_rect(std::span<const Point> points) {
  const ConvexPolygon hull = ConvexPolygon::hull_of(points);
  const auto verts = hull.vertices();
  const std::size_t n = verts.size();
  double best_area = k_inf;
  std::array<Point, 4> best{};
  for (std::size_t i = 0; i < n; ++i) {
    const Point edge = verts[(i + 1) % n] - verts[i];
    const double len = norm(edge);
    if (len <= 0.0) continue;
    const Point u{edge.x / len, edge.y / len};
    const Point v{-u.y, u.x};
    double a_min = k_inf, a_max = -k_inf, b_min = k_inf, b_max = -k_inf;
    for (const Point& p : verts) {
      const double pa = dot(p, u);
      const double pb = dot(p, v);
      a_min = std::min(a_min, pa);
      a_max = std::max(a_max, pa);
      b_min = std::min(b_min, pb);
      b_max = std::max(b_max, pb);
    }
    const double area = (a_max - a_min) * (b_max - b_min);
    if (area < best_area) {
      best_area = area;
      best = {u * a_min + v * b_min, u * a_max + v * b_min,
              u * a_max + v * b_max, u * a_min + v * b_max};
    }
  }
  if (!std::isfinite(best_area)) fail("min_area_rect: degenerate input");
  return make_oriented_box_from_cycle(best);
}

OrientedBox min_area_rect(const ConvexPolygon& polygon) {
  return min_area_rect(polygon.vertices());
}

AxisBox enclosing_axis_box(const OrientedBox& r) {
  double lo_x = k_inf, hi_x = -k_inf, lo_y = k_inf, hi_y = -k_inf;
  for (const Point& p : r.vertices()) {
    lo_x = std::min(lo_x, p.x);
    hi_x = std::max(hi_x, p.x);
    lo_y = std::min(lo_y, p.y);
    hi_y = std::max(hi_y, p.y);
  }
  if (!(lo_x < hi_x) || !(lo_y < hi_y)) {
    fail("enclosing_axis_box: degenerate rectangle");
  }
  return AxisBox::from_corners(lo_x, lo_y, hi_x, hi_y);
}

namespace {

// Maximal height of the chirality-1 rectangle whose upper side runs
// from (x_min, y_min + d1*h_b) to (x_min + d2*w_b, y_min).
double max_height_ch1(const AxisBox& b, double d1, double d2) {
  const double a = d1 * b.h;
  const double c = d2 * b.w;
  const double len = std::hypot(a, c);
  if (len <= 0.0) return b.h;  // degenerate corner code
  double limit = k_inf;
  if (a > 0.0) limit = std::min(limit, (b.w - c) / a);
  if (c > 0.0) limit = std::min(limit, (b.h - a) / c);
  return std::max(0.0, len * limit);
}

// Mirror case: upper side from (x_min + d1*w_b, y_min) to
// (x_max, y_min + d2*h_b); the rectangle extends down-left.
double max_height_ch2(const AxisBox& b, double d1, double d2) {
  const double a = d2 * b.h;
  const double c = (1.0 - d1) * b.w;
  const double len = std::hypot(a, c);
  if (len <= 0.0) return 0.0;
  double limit = k_inf;
  if (a > 0.0) limit = std::min(limit, d1 * b.w / a);
  if (c > 0.0) limit = std::min(limit, (b.h - a) / c);
  return std::max(0.0, len * limit);
}

// The inward normal of the upper side: rotating the edge by a quarter
// turn clockwise on screen, which in coordinates is (x, y) -> (-y, x).
Point inward_normal(Point edge) {
  const double len = norm(edge);
  if (len <= 0.0) return Point{0.0, 1.0};
  return Point{-edge.y / len, edge.x / len};
}

OrientedBox build_ch1(const AxisBox& b, double d1, double d2, double height) {
  const Point p1{b.x_min(), b.y_min() + d1 * b.h};
  const Point p2{b.x_min() + d2 * b.w, b.y_min()};
  const Point normal = inward_normal(p2 - p1);
  return make_oriented_box_from_cycle(
      {p1, p2, p2 + normal * height, p1 + normal * height});
}

OrientedBox build_ch2(const AxisBox& b, double d1, double d2, double height) {
  const Point p1{b.x_min() + d1 * b.w, b.y_min()};
  const Point p2{b.x_max(), b.y_min() + d2 * b.h};
  const Point normal = inward_normal(p2 - p1);
  return make_oriented_box_from_cycle(
      {p1, p2, p2 + normal * height, p1 + normal * height});
}

bool near_axis_aligned(const OrientedBox& r, double tol) {
  for (int i = 0; i < 4; ++i) {
    const Point e = r.vertices()[(i + 1) % 4] - r.vertices()[i];
    if (std::min(std::abs(e.x), std::abs(e.y)) > tol) return false;
  }
  return true;
}

}  // namespace

RBoxCode encode_rbox(const OrientedBox& r, const AxisBox& b) {
  const double tol = k_geom_eps * std::max(b.w, b.h);
  for (const Point& p : r.vertices()) {
    if (!b.contains(p, tol)) {
      fail("encode_rbox: rectangle is not inscribed in the box");
    }
  }
  if (near_axis_aligned(r, tol)) {
    const AxisBox rb = enclosing_axis_box(r);
    if (std::abs(rb.x_min() - b.x_min()) > tol ||
        std::abs(rb.x_max() - b.x_max()) > tol ||
        std::abs(rb.y_min() - b.y_min()) > tol ||
        std::abs(rb.y_max() - b.y_max()) > tol) {
      fail("encode_rbox: axis-aligned rectangle differs from its box");
    }
    return RBoxCode{0.0, 0.0, 1.0};
  }

  const auto& v = r.vertices();
  int left = 0, top = 0;
  for (int i = 1; i < 4; ++i) {
    if (v[i].x < v[left].x) left = i;
    if (v[i].y < v[top].y) top = i;
  }
  if (std::abs(v[left].x - b.x_min()) > tol ||
      std::abs(v[top].y - b.y_min()) > tol) {
    fail("encode_rbox: upper side is not anchored on the box edges");
  }
  const double d1 = clamp01((v[left].y - b.y_min()) / b.h);
  const double d2 = clamp01((v[top].x - b.x_min()) / b.w);
  // Height is the side adjacent to the upper side.
  const int next = (top + 1) % 4;
  const int prev = (top + 3) % 4;
  const double height = norm(v[next == left ? prev : next] - v[top]);
  const double h_max = max_height_ch1(b, d1, d2);
  const double h = h_max > 0.0 ? clamp01(height / h_max) : 1.0;
  return RBoxCode{d1, d2, h};
}

DecodedRBoxes decode_rbox(const AxisBox& b, const RBoxCode& code) {
  auto check01 = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      fail(std::string("decode_rbox: ") + name + " outside [0, 1]");
    }
  };
  check01(code.d1, "d1");
  check01(code.d2, "d2");
  if (code.h) check01(*code.h, "h");

  DecodedRBoxes out;
  const double eps = k_geom_eps;
  if (code.d1 <= eps && code.d2 <= eps) {
    // Degenerate corner convention: the code names the box itself,
    // scaled to a top slab when h < 1.
    if (code.h) {
      const double height = std::max(*code.h, 0.0) * b.h;
      const Point tl{b.x_min(), b.y_min()};
      const Point tr{b.x_max(), b.y_min()};
      out.candidates.push_back(make_oriented_box_from_cycle(
          {tl, tr, tr + Point{0.0, height}, tl + Point{0.0, height}}));
    } else {
      out.candidates.push_back(OrientedBox::axis_aligned(b));
      out.candidates.push_back(OrientedBox::axis_aligned(b));
    }
  } else if (code.h) {
    const double h_max = max_height_ch1(b, code.d1, code.d2);
    out.candidates.push_back(build_ch1(b, code.d1, code.d2, *code.h * h_max));
  } else {
    out.candidates.push_back(
        build_ch1(b, code.d1, code.d2, max_height_ch1(b, code.d1, code.d2)));
    out.candidates.push_back(
        build_ch2(b, code.d1, code.d2, max_height_ch2(b, code.d1, code.d2)));
  }
  for (const OrientedBox& candidate : out.candidates) {
    if (candidate.degenerate()) out.degenerate = true;
  }
  return out;
}

}  // namespace obdet
