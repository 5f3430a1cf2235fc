#pragma once

// Definitional reference implementations. Deliberately naive and independent
// of the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "percept/grid.hpp"

namespace oracle {

using percept::BinaryMask;
using percept::Grid;
using percept::Point;

inline std::vector<Point> disc(int r) {
  std::vector<Point> out;
  for (int dy = -r; dy <= r; ++dy)
    for (int dx = -r; dx <= r; ++dx)
      if (dx * dx + dy * dy <= r * r) out.push_back({dx, dy});
  return out;
}

inline bool at(const BinaryMask& m, int x, int y) {
  return x >= 0 && y >= 0 && x < m.width() && y < m.height() && m(x, y) != 0;
}

/// z set iff z + o is set for every o.
inline BinaryMask erode(const BinaryMask& m, const std::vector<Point>& se) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool all = true;
      for (auto o : se) all = all && at(m, x + o.x, y + o.y);
      out(x, y) = all;
    }
  return out;
}

/// z set iff z - o is set for some o.
inline BinaryMask dilate(const BinaryMask& m, const std::vector<Point>& se) {
  BinaryMask out(m.width(), m.height());
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x) {
      bool any = false;
      for (auto o : se) any = any || at(m, x - o.x, y - o.y);
      out(x, y) = any;
    }
  return out;
}

/// Background reachable from the border by 4-steps, found by relaxation to a fixpoint.
inline BinaryMask fill_holes(const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  BinaryMask reach(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (!m(x, y) && (x == 0 || y == 0 || x == w - 1 || y == h - 1)) reach(x, y) = 1;
  for (bool changed = true; changed;) {
    changed = false;
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        if (m(x, y) || reach(x, y)) continue;
        const bool n = (x > 0 && reach(x - 1, y)) || (x + 1 < w && reach(x + 1, y)) || (y > 0 && reach(x, y - 1)) ||
                       (y + 1 < h && reach(x, y + 1));
        if (n) {
          reach(x, y) = 1;
          changed = true;
        }
      }
  }
  BinaryMask out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out(x, y) = !reach(x, y);
  return out;
}

/// 8-connected component areas via union-find, sorted descending.
inline std::vector<std::size_t> component_areas(const BinaryMask& m) {
  const int w = m.width(), h = m.height();
  std::vector<int> parent(static_cast<std::size_t>(w) * h);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      if (!m(x, y)) continue;
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (at(m, x + dx, y + dy)) parent[find(y * w + x)] = find((y + dy) * w + x + dx);
    }
  std::vector<std::size_t> count(parent.size(), 0);
  for (int i = 0; i < w * h; ++i)
    if (m.values()[static_cast<std::size_t>(i)]) ++count[static_cast<std::size_t>(find(i))];
  std::vector<std::size_t> areas;
  for (auto c : count)
    if (c) areas.push_back(c);
  std::sort(areas.rbegin(), areas.rend());
  return areas;
}

inline long long cross(Point o, Point a, Point b) {
  return static_cast<long long>(a.x - o.x) * (b.y - o.y) - static_cast<long long>(a.y - o.y) * (b.x - o.x);
}

/// Hull vertices by the O(n^3) edge test: (a, b) is a counter-clockwise hull
/// edge iff no point lies strictly right of it and collinear points lie on
/// the closed segment. Returned as a cycle starting at the lowest (x, y).
inline std::vector<Point> hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() == 1) return pts;
  std::vector<std::pair<Point, Point>> edges;
  for (auto a : pts)
    for (auto b : pts) {
      if (a == b) continue;
      bool ok = true;
      for (auto c : pts) {
        const long long cr = cross(a, b, c);
        if (cr < 0) ok = false;
        if (cr == 0 && (std::min(a.x, b.x) > c.x || c.x > std::max(a.x, b.x) || std::min(a.y, b.y) > c.y ||
                        c.y > std::max(a.y, b.y)))
          ok = false;
        if (!ok) break;
      }
      if (ok) edges.emplace_back(a, b);
    }
  if (edges.size() == 2 && edges[0].first == edges[1].second) return {pts.front(), pts.back()};  // collinear
  std::vector<Point> cycle{pts.front()};
  while (cycle.size() <= edges.size()) {
    auto it = std::find_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == cycle.back(); });
    if (it == edges.end() || it->second == cycle.front()) break;
    cycle.push_back(it->second);
  }
  return cycle;
}

inline bool is_nan(float v) { return v != v; }

/// Window membership by integer division: input (x, y) feeds output (x/k, y/k).
inline Grid<float> min_pool(const Grid<float>& in, int k) {
  const int rows = static_cast<int>(std::ceil(in.height() / static_cast<double>(k)));
  const int cols = static_cast<int>(std::ceil(in.width() / static_cast<double>(k)));
  Grid<float> out(cols, rows, std::numeric_limits<float>::quiet_NaN());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      std::vector<float> window;
      for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x)
          if (y / k == i && x / k == j && !is_nan(in(x, y))) window.push_back(in(x, y));
      if (!window.empty()) out(j, i) = *std::min_element(window.begin(), window.end());
    }
  return out;
}

inline Grid<float> average_pool(const Grid<float>& in, int k) {
  const int rows = static_cast<int>(std::ceil(in.height() / static_cast<double>(k)));
  const int cols = static_cast<int>(std::ceil(in.width() / static_cast<double>(k)));
  Grid<float> out(cols, rows, std::numeric_limits<float>::quiet_NaN());
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double sum = 0;
      int n = 0;
      for (int y = 0; y < in.height(); ++y)
        for (int x = 0; x < in.width(); ++x)
          if (y / k == i && x / k == j && !is_nan(in(x, y))) {
            sum += in(x, y);
            ++n;
          }
      if (n) out(j, i) = static_cast<float>(sum / n);
    }
  return out;
}

inline std::vector<float> grouped(const Grid<float>& in, const std::vector<int>& kernels) {
  std::vector<float> out;
  for (int k : kernels) {
    const auto p = average_pool(in, k);
    for (int y = 0; y < p.height(); ++y)
      for (int x = 0; x < p.width(); ++x)
        if (!is_nan(p(x, y))) out.push_back(p(x, y));
  }
  return out;
}

/// Inlier flags for [mean - k*sigma, mean + k*sigma], population sigma.
inline std::vector<bool> inliers(const std::vector<float>& v, double k = 2.0) {
  std::vector<double> d;
  for (float x : v)
    if (!is_nan(x)) d.push_back(x);
  std::vector<bool> out(v.size(), false);
  if (d.empty()) return out;
  const double mean = std::accumulate(d.begin(), d.end(), 0.0) / static_cast<double>(d.size());
  double ss = 0;
  for (double x : d) ss += (x - mean) * (x - mean);
  const double sigma = std::sqrt(ss / static_cast<double>(d.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = !is_nan(v[i]) && v[i] >= mean - k * sigma && v[i] <= mean + k * sigma;
  return out;
}

inline Grid<float> random_grid(std::mt19937_64& rng, int w, int h, double nan_density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Grid<float> g(w, h);
  for (auto& v : g.values())
    v = u(rng) < nan_density ? std::numeric_limits<float>::quiet_NaN() : static_cast<float>(1.0 + 79.0 * u(rng));
  return g;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double density) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BinaryMask m(w, h);
  for (auto& v : m.values()) v = u(rng) < density;
  return m;
}

struct Counts {
  int tp, fp, fn;
};

/// Smallest (tp, then fp, then fn) whose precision and recall, in percent,
/// lie within `tol` of the published values.
inline std::optional<Counts> search_counts(double p_pct, double r_pct, double tol = 0.01, int max_tp = 400) {
  for (int tp = 1; tp <= max_tp; ++tp)
    for (int fp = 0; fp <= tp; ++fp) {
      if (std::abs(100.0 * tp / (tp + fp) - p_pct) > tol) continue;
      for (int fn = 0; fn <= tp; ++fn)
        if (std::abs(100.0 * tp / (tp + fn) - r_pct) <= tol) return Counts{tp, fp, fn};
    }
  return std::nullopt;
}

}  // namespace oracle
