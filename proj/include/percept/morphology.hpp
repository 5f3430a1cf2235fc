#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "percept/grid.hpp"

namespace percept {

/// Binary structuring element given as a set of integer offsets.
///
/// Offsets are grouped into horizontal runs, one per dy, whenever every row
/// of the element is contiguous (always true for discs). Erosion and dilation
/// then push whole source runs through each element row into per-row
/// difference counts instead of visiting |offsets| neighbours per pixel.
class StructuringElement {
 public:
  struct Run {
    int dy;
    int dx_min;
    int dx_max;
  };

  /// Closed disc: all (dx,dy) with dx^2 + dy^2 <= radius^2.
  static StructuringElement disc(int radius) {
    if (radius < 1) throw std::invalid_argument("disc radius must be >= 1");
    std::vector<Point> offsets;
    for (int dy = -radius; dy <= radius; ++dy)
      for (int dx = -radius; dx <= radius; ++dx)
        if (dx * dx + dy * dy <= radius * radius) offsets.push_back({dx, dy});
    return StructuringElement(std::move(offsets), radius);
  }

  /// Arbitrary offset set (used by tests, e.g. the identity element {(0,0)}).
  static StructuringElement from_offsets(std::vector<Point> offsets) {
    if (offsets.empty()) throw std::invalid_argument("structuring element must be non-empty");
    int r = 0;
    for (auto p : offsets) r = std::max({r, std::abs(p.x), std::abs(p.y)});
    return StructuringElement(std::move(offsets), r);
  }

  int radius() const noexcept { return radius_; }
  const std::vector<Point>& offsets() const noexcept { return offsets_; }
  const std::optional<std::vector<Run>>& runs() const noexcept { return runs_; }

  bool contains_origin() const {
    return std::find(offsets_.begin(), offsets_.end(), Point{0, 0}) != offsets_.end();
  }

  bool is_symmetric() const {
    return std::all_of(offsets_.begin(), offsets_.end(), [&](Point p) {
      return std::find(offsets_.begin(), offsets_.end(), Point{-p.x, -p.y}) != offsets_.end();
    });
  }

  /// Minkowski sum, B1 (+) B2.
  friend StructuringElement minkowski_sum(const StructuringElement& a, const StructuringElement& b) {
    std::vector<Point> out;
    for (auto p : a.offsets_)
      for (auto q : b.offsets_) out.push_back({p.x + q.x, p.y + q.y});
    return from_offsets(std::move(out));
  }

 private:
  StructuringElement(std::vector<Point> offsets, int radius) : radius_(radius) {
    std::sort(offsets.begin(), offsets.end());
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());
    offsets_ = std::move(offsets);
    build_runs();
  }

  void build_runs() {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < offsets_.size();) {
      std::size_t j = i;
      while (j + 1 < offsets_.size() && offsets_[j + 1].y == offsets_[i].y &&
             offsets_[j + 1].x == offsets_[j].x + 1)
        ++j;
      if (j + 1 < offsets_.size() && offsets_[j + 1].y == offsets_[i].y) return;  // gap in row
      runs.push_back({offsets_[i].y, offsets_[i].x, offsets_[j].x});
      i = j + 1;
    }
    runs_ = std::move(runs);
  }

  int radius_ = 0;
  std::vector<Point> offsets_;
  std::optional<std::vector<Run>> runs_;
};

namespace detail {

template <bool Erode>
BinaryMask morph(const BinaryMask& mask, const StructuringElement& se) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(w, h);
  if (w == 0 || h == 0) return out;

  if (!se.runs()) {
    // Generic path for non-row-convex elements.
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        bool hit = Erode;
        for (auto o : se.offsets()) {
          // Dilation uses the reflected element; erosion the element itself.
          const int sx = Erode ? x + o.x : x - o.x;
          const int sy = Erode ? y + o.y : y - o.y;
          const bool on = mask.contains(sx, sy) && mask(sx, sy);
          if (Erode && !on) { hit = false; break; }
          if (!Erode && on) { hit = true; break; }
        }
        out(x, y) = hit ? 1 : 0;
      }
    return out;
  }

  // Scatter runs through every element run into per-row difference counts.
  // Dilation: each run of ones marks p + o. Erosion: each run of zeros, and
  // every off-frame position, rules out z = p - o.
  const auto& runs = *se.runs();
  std::vector<int> diff(static_cast<std::size_t>(w + 1) * h, 0);
  auto mark = [&](int y, int lo, int hi) {
    if (y < 0 || y >= h) return;
    lo = std::max(lo, 0);
    hi = std::min(hi, w - 1);
    if (lo > hi) return;
    int* d = diff.data() + static_cast<std::size_t>(y) * (w + 1);
    ++d[lo];
    --d[hi + 1];
  };
  constexpr std::uint8_t kSource = Erode ? 0 : 1;
  for (int sy = 0; sy < h; ++sy) {
    auto src = mask.row(sy);
    for (int x = 0; x < w;) {
      if ((src[x] != 0) != (kSource != 0)) {
        ++x;
        continue;
      }
      const int a = x;
      while (x < w && (src[x] != 0) == (kSource != 0)) ++x;
      const int b = x - 1;
      for (const auto& run : runs) {
        if (Erode) mark(sy - run.dy, a - run.dx_max, b - run.dx_min);
        else mark(sy + run.dy, a + run.dx_min, b + run.dx_max);
      }
    }
  }
  if (Erode)
    for (const auto& run : runs)
      for (int y = 0; y < h; ++y) {
        if (y + run.dy < 0 || y + run.dy >= h) {
          mark(y, 0, w - 1);
          continue;
        }
        mark(y, 0, -run.dx_min - 1);
        mark(y, w - run.dx_max, w - 1);
      }
  for (int y = 0; y < h; ++y) {
    auto dst = out.row(y);
    const int* d = diff.data() + static_cast<std::size_t>(y) * (w + 1);
    int acc = 0;
    for (int x = 0; x < w; ++x) {
      acc += d[x];
      dst[x] = (acc > 0) != Erode ? 1 : 0;
    }
  }
  return out;
}

}  // namespace detail

/// z is set iff the element translated to z lies entirely on set pixels.
/// Pixels outside the frame count as 0.
inline BinaryMask erode(const BinaryMask& mask, const StructuringElement& se) {
  return detail::morph<true>(mask, se);
}

/// z is set iff the reflected element translated to z hits a set pixel.
inline BinaryMask dilate(const BinaryMask& mask, const StructuringElement& se) {
  return detail::morph<false>(mask, se);
}

/// Erosion followed by dilation with the same element.
inline BinaryMask open(const BinaryMask& mask, const StructuringElement& se) {
  return dilate(erode(mask, se), se);
}

/// Sets every 0-pixel that cannot reach the frame border through
/// 4-connected 0-pixels.
inline BinaryMask fill_holes(const BinaryMask& mask) {
  const int w = mask.width();
  const int h = mask.height();
  BinaryMask out(w, h, 1);
  if (w == 0 || h == 0) return out;
  const std::uint8_t* in = mask.values().data();
  std::uint8_t* o = out.values().data();
  std::vector<std::size_t> stack;
  auto seed = [&](std::size_t i) {
    if (!in[i] && o[i]) {
      o[i] = 0;
      stack.push_back(i);
    }
  };
  const auto W = static_cast<std::size_t>(w);
  for (int x = 0; x < w; ++x) {
    seed(static_cast<std::size_t>(x));
    seed((static_cast<std::size_t>(h) - 1) * W + static_cast<std::size_t>(x));
  }
  for (int y = 0; y < h; ++y) {
    seed(static_cast<std::size_t>(y) * W);
    seed(static_cast<std::size_t>(y) * W + W - 1);
  }
  while (!stack.empty()) {
    const std::size_t i = stack.back();
    stack.pop_back();
    const std::size_t x = i % W;
    if (x > 0) seed(i - 1);
    if (x + 1 < W) seed(i + 1);
    if (i >= W) seed(i - W);
    if (i + W < W * static_cast<std::size_t>(h)) seed(i + W);
  }
  return out;
}

/// One 8-connected foreground component.
struct Contour {
  PointSet boundary;   // outer boundary, Moore-traced, clockwise in image coordinates
  std::size_t area = 0;
  int class_id = 0;
  int label = 0;       // index into the label image returned alongside
  Point first;         // first pixel in raster order
};

struct ComponentLabels {
  Grid<int> labels;               // 0 = background, k+1 = component k before sorting
  std::vector<Contour> contours;  // sorted by area descending
};

namespace detail {

// Clockwise neighbour ring in image coordinates (y grows downwards), starting west.
inline constexpr Point kMoore[8] = {{-1, 0}, {-1, -1}, {0, -1}, {1, -1},
                                    {1, 0},  {1, 1},   {0, 1},  {-1, 1}};

inline int moore_index(Point d) {
  for (int i = 0; i < 8; ++i)
    if (kMoore[i] == d) return i;
  return -1;
}

/// Moore-neighbour tracing with Jacob's stopping criterion.
inline PointSet trace_boundary(const Grid<int>& labels, int label, Point start) {
  auto inside = [&](Point p) { return labels.contains(p) && labels[p] == label; };
  PointSet boundary{start};
  // The raster-first pixel always has a background west neighbour.
  int backtrack = 0;
  Point cur = start;
  int first_move = -1;
  for (std::size_t guard = 0; guard < 4 * labels.size() + 8; ++guard) {
    int found = -1;
    for (int i = 0; i < 8; ++i) {
      const int d = (backtrack + i) % 8;
      if (inside({cur.x + kMoore[d].x, cur.y + kMoore[d].y})) {
        found = d;
        break;
      }
    }
    if (found < 0) break;  // isolated pixel
    if (cur == start) {
      if (first_move < 0) first_move = found;
      else if (found == first_move) break;
    }
    const Point prev{cur.x + kMoore[(found + 7) % 8].x, cur.y + kMoore[(found + 7) % 8].y};
    const Point next{cur.x + kMoore[found].x, cur.y + kMoore[found].y};
    backtrack = moore_index({prev.x - next.x, prev.y - next.y});
    cur = next;
    if (cur == start) continue;
    boundary.push_back(cur);
  }
  return boundary;
}

}  // namespace detail

/// Labels 8-connected components and extracts each outer boundary and area.
inline ComponentLabels label_components(const BinaryMask& mask) {
  ComponentLabels result{Grid<int>(mask.width(), mask.height(), 0), {}};
  auto& labels = result.labels;
  std::vector<Point> stack;
  int next = 0;
  for (int y = 0; y < mask.height(); ++y)
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || labels(x, y)) continue;
      const int label = ++next;
      Contour c;
      c.label = label;
      c.first = {x, y};
      labels(x, y) = label;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        ++c.area;
        for (auto d : detail::kMoore) {
          const int nx = p.x + d.x, ny = p.y + d.y;
          if (mask.contains(nx, ny) && mask(nx, ny) && !labels(nx, ny)) {
            labels(nx, ny) = label;
            stack.push_back({nx, ny});
          }
        }
      }
      c.boundary = detail::trace_boundary(labels, label, c.first);
      result.contours.push_back(std::move(c));
    }
  std::stable_sort(result.contours.begin(), result.contours.end(),
                   [](const Contour& a, const Contour& b) { return a.area > b.area; });
  return result;
}

inline std::vector<Contour> connected_components(const BinaryMask& mask) {
  return label_components(mask).contours;
}

}  // namespace percept
