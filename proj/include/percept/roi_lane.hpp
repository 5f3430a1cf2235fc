#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "percept/errors.hpp"
#include "percept/hull.hpp"
#include "percept/morphology.hpp"
#include "percept/registry.hpp"

namespace percept {

struct LaneInstance {
  int instance_id = 0;
  PointSet points;  // ordered as produced upstream

  friend bool operator==(const LaneInstance&, const LaneInstance&) = default;
};

struct RoiMask {
  BinaryMask mask;
  int source_frame = 0;
  bool degenerate = false;
};

/// Default disc radius: 5 px at 1280 wide, scaled with frame width.
inline int default_se_radius(int frame_width) {
  return std::max(1, static_cast<int>(std::lround(5.0 * frame_width / 1280.0)));
}

/// Road ROI: hull of the road mask, rasterized, then opened with `se`.
/// Fewer than three road pixels or a collinear road mask give a degenerate
/// ROI equal to the raw road mask dilated once.
inline RoiMask build_dynamic_roi(const SegMap& seg, int road_class_id, const StructuringElement& se,
                                 int frame_index = 0) {
  const int w = seg.width(), h = seg.height();
  if (w <= 0 || h <= 0) throw InputError("segmentation map has no pixels");
  const BinaryMask road = seg.class_mask(road_class_id);

  // Per-row extremes carry every hull vertex of the full pixel set.
  PointSet extremes;
  std::size_t road_pixels = 0;
  for (int y = 0; y < h; ++y) {
    auto row = road.row(y);
    int first = -1, last = -1;
    for (int x = 0; x < w; ++x)
      if (row[x]) {
        if (first < 0) first = x;
        last = x;
        ++road_pixels;
      }
    if (first >= 0) {
      extremes.push_back({first, y});
      if (last != first) extremes.push_back({last, y});
    }
  }

  RoiMask roi{BinaryMask(w, h), frame_index, true};
  if (road_pixels == 0) return roi;
  const Hull hull = convex_hull(extremes);
  if (road_pixels < 3 || hull.degenerate) {
    roi.mask = dilate(road, se);
    return roi;
  }
  roi.mask = open(rasterize_hull(hull, w, h), se);
  roi.degenerate = false;
  return roi;
}

/// Keeps lane points lying on the ROI. An instance survives when at least
/// `keep_fraction` of its points and no fewer than two points remain.
inline std::vector<LaneInstance> filter_lanes(const std::vector<LaneInstance>& lanes, const RoiMask& roi,
                                              double keep_fraction = 0.5) {
  std::vector<LaneInstance> out;
  for (const auto& lane : lanes) {
    if (lane.points.empty()) continue;
    LaneInstance kept{lane.instance_id, {}};
    for (auto p : lane.points)
      if (roi.mask.contains(p) && roi.mask[p]) kept.points.push_back(p);
    const double frac = static_cast<double>(kept.points.size()) / static_cast<double>(lane.points.size());
    if (kept.points.size() >= 2 && frac >= keep_fraction) out.push_back(std::move(kept));
  }
  return out;
}

namespace detail {

/// x of the polyline at row y, or NaN outside its y-range. Points are
/// consumed sorted by y; rows covered by several segments use the first.
inline double polyline_x_at(const PointSet& sorted, int y) {
  if (sorted.empty() || y < sorted.front().y || y > sorted.back().y) return std::nan("");
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const Point a = sorted[i], b = sorted[i + 1];
    if (y < a.y || y > b.y) continue;
    if (a.y == b.y) return 0.5 * (a.x + b.x);
    return a.x + (b.x - a.x) * static_cast<double>(y - a.y) / static_cast<double>(b.y - a.y);
  }
  return sorted.size() == 1 ? sorted.front().x : std::nan("");
}

inline double mean_x(const LaneInstance& lane) {
  double s = 0.0;
  for (auto p : lane.points) s += p.x;
  return lane.points.empty() ? 0.0 : s / static_cast<double>(lane.points.size());
}

}  // namespace detail

/// Masks of ROI pixels strictly between horizontally adjacent lanes (ordered
/// by mean x). Line pixels belong to no region, and rows outside either
/// polyline's y-range are excluded. Fewer than two lanes yields no regions.
inline std::vector<BinaryMask> lane_regions(const std::vector<LaneInstance>& lanes, const RoiMask& roi) {
  std::vector<BinaryMask> regions;
  if (lanes.size() < 2) return regions;
  const int w = roi.mask.width(), h = roi.mask.height();

  std::vector<std::pair<double, PointSet>> ordered;
  for (const auto& lane : lanes) {
    PointSet pts = lane.points;
    std::stable_sort(pts.begin(), pts.end(), [](Point a, Point b) { return a.y < b.y; });
    ordered.emplace_back(detail::mean_x(lane), std::move(pts));
  }
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  BinaryMask claimed(w, h);
  for (std::size_t k = 0; k + 1 < ordered.size(); ++k) {
    BinaryMask region(w, h);
    const auto& left = ordered[k].second;
    const auto& right = ordered[k + 1].second;
    const int y0 = std::max({left.front().y, right.front().y, 0});
    const int y1 = std::min({left.back().y, right.back().y, h - 1});
    for (int y = y0; y <= y1; ++y) {
      const double xl = detail::polyline_x_at(left, y);
      const double xr = detail::polyline_x_at(right, y);
      if (std::isnan(xl) || std::isnan(xr)) continue;
      const int start = std::max(0, static_cast<int>(std::floor(xl)) + 1);
      const int end = std::min(w - 1, static_cast<int>(std::ceil(xr)) - 1);
      for (int x = start; x <= end; ++x)
        if (roi.mask(x, y) && !claimed(x, y)) {
          region(x, y) = 1;
          claimed(x, y) = 1;
        }
    }
    regions.push_back(std::move(region));
  }
  return regions;
}

}  // namespace percept
