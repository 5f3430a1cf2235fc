#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "percept/hull.hpp"
#include "percept/morphology.hpp"
#include "percept/registry.hpp"

namespace percept {

struct RefinedClass {
  BinaryMask mask;
  std::vector<Hull> hulls;  // one per surviving component, largest first
};

/// Segmentation after per-class refinement. `seg` is the merged map; the
/// per-class masks are kept separately so overlap resolution never shrinks
/// what a consumer sees for one class.
struct RefinedSegMap {
  SegMap seg;
  std::map<int, RefinedClass> classes;

  const RefinedClass* find(int class_id) const {
    auto it = classes.find(class_id);
    return it == classes.end() ? nullptr : &it->second;
  }
};

/// dilate -> fill holes -> components -> area threshold -> per-component
/// convex hull -> union of rasterized hulls.
inline RefinedClass refine_class(const SegMap& seg, int class_id, const StructuringElement& se,
                                 double min_area_frac) {
  if (!(min_area_frac > 0.0 && min_area_frac < 1.0))
    throw std::invalid_argument("min_area_frac must lie in (0,1)");
  const int w = seg.width(), h = seg.height();
  RefinedClass out{BinaryMask(w, h), {}};

  const BinaryMask raw = seg.class_mask(class_id);
  if (count_ones(raw) == 0) return out;

  const BinaryMask filled = fill_holes(dilate(raw, se));
  const auto components = connected_components(filled);
  const double min_area = min_area_frac * static_cast<double>(w) * static_cast<double>(h);
  for (const auto& c : components) {
    if (static_cast<double>(c.area) < min_area) break;  // sorted by area
    Hull hull = convex_hull(c.boundary);
    const BinaryMask raster = rasterize_hull(hull, w, h);
    for (std::size_t i = 0; i < raster.size(); ++i)
      if (raster.values()[i]) out.mask.values()[i] = 1;
    out.hulls.push_back(std::move(hull));
  }
  return out;
}

/// Refines each listed class and merges them into one map. Where refined
/// masks overlap, the lower registry id wins. Pixels of refined classes that
/// fall outside their refined mask become background; other classes pass through.
inline RefinedSegMap refine_all(const SegMap& seg, std::vector<int> class_ids, const StructuringElement& se,
                                double min_area_frac) {
  if (class_ids.empty()) throw std::invalid_argument("refine_all: no classes given");
  std::sort(class_ids.begin(), class_ids.end());
  class_ids.erase(std::unique(class_ids.begin(), class_ids.end()), class_ids.end());

  RefinedSegMap out{seg, {}};
  for (int id : class_ids) out.classes.emplace(id, refine_class(seg, id, se, min_area_frac));

  bool refined[256] = {};
  std::vector<std::pair<std::uint8_t, const std::uint8_t*>> priority;
  for (int id : class_ids) {
    refined[id] = true;
    priority.emplace_back(static_cast<std::uint8_t>(id), out.classes.at(id).mask.values().data());
  }
  auto ids = out.seg.ids.values();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (refined[ids[i]]) ids[i] = 0;
    for (const auto& [id, mask] : priority) {
      if (mask[i]) {
        ids[i] = id;
        break;
      }
    }
  }
  return out;
}

}  // namespace percept
