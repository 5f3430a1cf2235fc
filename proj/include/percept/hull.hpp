#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <vector>

#include "percept/grid.hpp"

namespace percept {

/// Convex hull on integer pixel centres.
struct Hull {
  PointSet vertices;        // counter-clockwise (positive cross product), no collinear vertices
  bool degenerate = false;  // single point or collinear input
};

inline std::int64_t cross(Point o, Point a, Point b) {
  return static_cast<std::int64_t>(a.x - o.x) * (b.y - o.y) -
         static_cast<std::int64_t>(a.y - o.y) * (b.x - o.x);
}

/// Andrew's monotone chain. Collinear input yields its two extreme endpoints
/// and a single point yields itself; both are flagged degenerate.
inline Hull convex_hull(PointSet points) {
  if (points.empty()) throw std::invalid_argument("convex_hull: empty point set");
  std::sort(points.begin(), points.end(), [](Point a, Point b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (points.size() == 1) return {points, true};

  const std::size_t n = points.size();
  PointSet h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], points[i]) <= 0) --k;
    h[k++] = points[i];
  }
  for (std::size_t i = n - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], points[i]) <= 0) --k;
    h[k++] = points[i];
  }
  h.resize(k - 1);
  if (h.size() < 3) return {{points.front(), points.back()}, true};
  return {std::move(h), false};
}

/// Overload for callers holding points in a span-like range.
inline Hull convex_hull(std::span<const Point> points) {
  return convex_hull(PointSet(points.begin(), points.end()));
}

/// Twice the signed polygon area (shoelace).
inline std::int64_t twice_area(const PointSet& poly) {
  std::int64_t a = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point p = poly[i], q = poly[(i + 1) % poly.size()];
    a += static_cast<std::int64_t>(p.x) * q.y - static_cast<std::int64_t>(q.x) * p.y;
  }
  return a;
}

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

inline void draw_segment(BinaryMask& m, Point a, Point b) {
  int dx = std::abs(b.x - a.x), sx = a.x < b.x ? 1 : -1;
  int dy = -std::abs(b.y - a.y), sy = a.y < b.y ? 1 : -1;
  int err = dx + dy;
  for (;;) {
    if (m.contains(a)) m[a] = 1;
    if (a == b) break;
    const int e2 = 2 * err;
    if (e2 >= dy) { err += dy; a.x += sx; }
    if (e2 <= dx) { err += dx; a.y += sy; }
  }
}

}  // namespace detail

/// Pixel is set iff its centre lies inside or on the hull polygon. Degenerate
/// hulls rasterize as the point or the Bresenham segment between endpoints.
inline BinaryMask rasterize_hull(const Hull& hull, int width, int height) {
  BinaryMask out(width, height);
  const auto& v = hull.vertices;
  if (v.empty()) return out;
  if (v.size() == 1) {
    if (out.contains(v[0])) out[v[0]] = 1;
    return out;
  }
  if (v.size() == 2) {
    detail::draw_segment(out, v[0], v[1]);
    return out;
  }

  int ymin = v[0].y, ymax = v[0].y;
  for (auto p : v) {
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  ymin = std::max(ymin, 0);
  ymax = std::min(ymax, height - 1);
  // Edge constraint for CCW polygons: cross(v_i, v_{i+1}, p) >= 0, i.e. a*x >= c(y).
  for (int y = ymin; y <= ymax; ++y) {
    std::int64_t lo = 0, hi = width - 1;
    for (std::size_t i = 0; i < v.size() && lo <= hi; ++i) {
      const Point p = v[i], q = v[(i + 1) % v.size()];
      const std::int64_t ex = q.x - p.x, ey = q.y - p.y;
      // ex*(y - p.y) - ey*(x - p.x) >= 0  <=>  -ey*x >= -ey*p.x - ex*(y - p.y)
      const std::int64_t a = -ey;
      const std::int64_t c = -ey * p.x - ex * (static_cast<std::int64_t>(y) - p.y);
      if (a > 0) lo = std::max(lo, detail::ceil_div(c, a));
      else if (a < 0) hi = std::min(hi, detail::floor_div(c, a));
      else if (c > 0) hi = -1;
    }
    auto row = out.row(y);
    for (std::int64_t x = lo; x <= hi; ++x) row[static_cast<std::size_t>(x)] = 1;
  }
  return out;
}

}  // namespace percept
