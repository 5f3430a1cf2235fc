#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "percept/detection.hpp"
#include "percept/errors.hpp"
#include "percept/random.hpp"
#include "percept/registry.hpp"
#include "percept/roi_lane.hpp"

namespace percept {

/// Synthetic scenes: a pinhole camera over a flat road with box objects.
///
/// Camera frame: x right, y down, z forward. The road is the plane
/// y = camera.height_m. Pixel (u, v) looks along ((u-cx)/f, (v-cy)/f, 1), and
/// the depth of a hit is its range from the camera centre.
namespace synth {

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

struct Camera {
  int width = 640;
  int height = 360;
  double focal_px = 500.0;
  double cx = 320.0;
  double cy = 180.0;
  double height_m = 1.5;
};

struct Road {
  double half_width_m = 5.5;
  std::vector<double> line_offsets_m{-5.25, -1.75, 1.75, 5.25};
  double sidewalk_width_m = 3.0;
  double length_m = 100.0;      // road and sidewalk end here
  double ground_far_m = 140.0;  // nothing is hit beyond this: depth 0
  double line_width_m = 0.15;
  double lane_far_m = 80.0;     // lane polylines stop here
  int lane_row_step = 8;
};

struct Object {
  std::string label;  // registry name, or traffic_sign:<name>
  Vec3 center;        // metres, camera frame
  Vec3 size;          // width (x), height (y), depth (z)
  std::optional<LightState> light_state;
};

struct Noise {
  double sigma_frac = 0.0;    // multiplicative Gaussian, per valid pixel
  double outlier_frac = 0.0;  // fraction of object pixels set to background depth
};

struct SceneSpec {
  std::uint64_t seed = 0;
  Camera camera;
  Road road;
  std::vector<Object> objects;
  Noise noise;
  bool emit_light_state = false;  // write fixture light states into detections
};

struct GroundTruthObject {
  int id = 0;
  std::string label;
  Box box;
  double distance_m = 0.0;  // range to the nearest visible point
  std::size_t pixels = 0;
  std::optional<LightState> light_state;
};

struct Frame {
  DepthMap depth;
  DepthMap clean_depth;
  DepthMap background_depth;  // the scene with no objects
  SegMap seg;
  RgbImage image;
  std::vector<Detection> detections;
  std::vector<LaneInstance> lanes;
  std::vector<GroundTruthObject> truth;
  Grid<std::uint8_t> lane_strips;  // 0 = none, k+1 = strip between lines k and k+1
  Grid<int> object_ids;            // -1 = no object
};

namespace palette {
inline constexpr Rgb road{90, 90, 90};
inline constexpr Rgb line{235, 235, 235};
inline constexpr Rgb sidewalk{160, 150, 145};
inline constexpr Rgb ground{85, 92, 85};
inline constexpr Rgb sky{32, 32, 40};
inline constexpr Rgb car{40, 60, 160};
inline constexpr Rgb bus{120, 40, 140};
inline constexpr Rgb person{200, 175, 160};
inline constexpr Rgb sign{200, 30, 30};
inline constexpr Rgb housing{25, 25, 25};
inline constexpr Rgb lamp_dark{50, 22, 20};
inline constexpr Rgb lamp_red{255, 40, 30};
inline constexpr Rgb lamp_yellow{255, 200, 0};
inline constexpr Rgb lamp_green{30, 220, 80};
}  // namespace palette

namespace detail {

/// Entry parameter of a ray from the origin into an axis-aligned box, if any.
inline std::optional<double> ray_box(const Vec3& dir, const Object& o, int& axis) {
  const double lo[3] = {o.center.x - o.size.x / 2, o.center.y - o.size.y / 2, o.center.z - o.size.z / 2};
  const double hi[3] = {o.center.x + o.size.x / 2, o.center.y + o.size.y / 2, o.center.z + o.size.z / 2};
  const double d[3] = {dir.x, dir.y, dir.z};
  double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
  axis = -1;
  for (int i = 0; i < 3; ++i) {
    if (d[i] == 0.0) {
      if (0.0 < lo[i] || 0.0 > hi[i]) return std::nullopt;
      continue;
    }
    double a = lo[i] / d[i], b = hi[i] / d[i];
    if (a > b) std::swap(a, b);
    if (a > t0) {
      t0 = a;
      axis = i;
    }
    t1 = std::min(t1, b);
    if (t0 > t1) return std::nullopt;
  }
  if (axis < 0) return std::nullopt;  // camera inside the box
  return t0;
}

inline Rgb object_colour(const Object& o, const Vec3& hit, int axis) {
  const std::string reg = registry_label(Detection{0, o.label, 1.0, {}, {}});
  if (reg == "car") return palette::car;
  if (reg == "bus") return palette::bus;
  if (reg == "person") return palette::person;
  if (reg == "traffic_sign") return palette::sign;
  if (reg == "traffic_light") {
    if (axis != 2) return palette::housing;
    // Front face split in thirds: red top, yellow middle, green bottom.
    const double top = o.center.y - o.size.y / 2;
    const int third = std::clamp(static_cast<int>((hit.y - top) / (o.size.y / 3.0)), 0, 2);
    const LightState lit = o.light_state.value_or(LightState::off);
    if (third == 0 && lit == LightState::red) return palette::lamp_red;
    if (third == 1 && lit == LightState::yellow) return palette::lamp_yellow;
    if (third == 2 && lit == LightState::green) return palette::lamp_green;
    return palette::lamp_dark;
  }
  return palette::housing;
}

}  // namespace detail

inline void validate(const SceneSpec& spec) {
  const auto& cam = spec.camera;
  if (cam.width <= 0 || cam.height <= 0 || !(cam.focal_px > 0) || !(cam.height_m > 0))
    throw InputError("scene: invalid camera");
  if (spec.noise.sigma_frac < 0 || spec.noise.outlier_frac < 0 || spec.noise.outlier_frac >= 1)
    throw InputError("scene: noise fractions must lie in [0,1)");
  for (const auto& o : spec.objects) {
    if (o.center.z - o.size.z / 2 <= 0.5)
      throw InputError("scene: object '" + o.label + "' is not in front of the near plane (0.5 m)");
    if (!(o.size.x > 0 && o.size.y > 0 && o.size.z > 0))
      throw InputError("scene: object '" + o.label + "' has a non-positive size");
  }
}

/// Multiplicative Gaussian noise (1 + sigma*g) on every valid pixel in raster
/// order, then round(outlier_frac * |mask|) mask pixels, chosen by a partial
/// Fisher-Yates shuffle, take the background depth.
inline DepthMap inject_noise(const DepthMap& depth, const DepthMap& background, const BinaryMask& mask,
                             const Noise& noise, std::uint64_t seed) {
  DepthMap out = depth;
  SceneRng rng(seed);
  if (noise.sigma_frac > 0)
    for (float& v : out.values())
      if (std::isfinite(v) && v > 0) v = static_cast<float>(v * (1.0 + noise.sigma_frac * rng.normal()));
  if (noise.outlier_frac > 0) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask.values()[i]) idx.push_back(i);
    const auto n = static_cast<std::size_t>(std::llround(noise.outlier_frac * static_cast<double>(idx.size())));
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t j = k + static_cast<std::size_t>(rng.below(idx.size() - k));
      std::swap(idx[k], idx[j]);
      out.values()[idx[k]] = background.values()[idx[k]];
    }
  }
  return out;
}

/// Lane line polylines, one instance per line, bottom row first.
inline std::vector<LaneInstance> project_lanes(const Camera& cam, const Road& road) {
  std::vector<LaneInstance> lanes;
  const double v_far = cam.cy + cam.focal_px * cam.height_m / road.lane_far_m;
  int id = 0;
  for (double offset : road.line_offsets_m) {
    LaneInstance lane{id++, {}};
    for (int v = cam.height - 1; v > v_far; v -= road.lane_row_step) {
      const double z = cam.focal_px * cam.height_m / (v - cam.cy);
      const double u = cam.cx + cam.focal_px * offset / z;
      const int ui = static_cast<int>(std::lround(u));
      if (ui >= 0 && ui < cam.width) lane.points.push_back({ui, v});
    }
    if (lane.points.size() >= 2) lanes.push_back(std::move(lane));
  }
  return lanes;
}

inline Frame render_scene(const SceneSpec& spec, const ClassRegistry& registry = ClassRegistry::defaults()) {
  validate(spec);
  const Camera& cam = spec.camera;
  const Road& road = spec.road;
  const int w = cam.width, h = cam.height;

  Frame f;
  f.clean_depth = DepthMap(w, h, 0.0f);
  f.background_depth = DepthMap(w, h, 0.0f);
  f.seg.ids = Grid<std::uint8_t>(w, h, 0);
  f.image = RgbImage(w, h, palette::sky);
  f.object_ids = Grid<int>(w, h, -1);

  std::vector<int> object_class;
  for (const auto& o : spec.objects)
    object_class.push_back(registry.id(registry_label(Detection{0, o.label, 1.0, {}, {}})));
  const int road_id = registry.id("road");
  const int sidewalk_id = registry.id("sidewalk");

  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const Vec3 dir{(u - cam.cx) / cam.focal_px, (v - cam.cy) / cam.focal_px, 1.0};
      const double norm = std::sqrt(dir.x * dir.x + dir.y * dir.y + dir.z * dir.z);

      // Ground plane.
      double t_ground = std::numeric_limits<double>::infinity();
      if (dir.y > 0) {
        const double t = cam.height_m / dir.y;
        if (t <= road.ground_far_m) t_ground = t;
      }
      if (std::isfinite(t_ground)) {
        const double gx = dir.x * t_ground;
        const double range = static_cast<float>(t_ground * norm);
        f.background_depth(u, v) = static_cast<float>(range);
        f.clean_depth(u, v) = static_cast<float>(range);
        const double ax = std::abs(gx);
        if (t_ground <= road.length_m && ax <= road.half_width_m) {
          f.seg.ids(u, v) = static_cast<std::uint8_t>(road_id);
          bool on_line = t_ground <= road.lane_far_m && std::any_of(road.line_offsets_m.begin(),
                                                                    road.line_offsets_m.end(), [&](double l) {
                                                                      return std::abs(gx - l) <= road.line_width_m / 2;
                                                                    });
          f.image(u, v) = on_line ? palette::line : palette::road;
        } else if (t_ground <= road.length_m && ax <= road.half_width_m + road.sidewalk_width_m) {
          f.seg.ids(u, v) = static_cast<std::uint8_t>(sidewalk_id);
          f.image(u, v) = palette::sidewalk;
        } else {
          f.image(u, v) = palette::ground;
        }
      }

      // Objects.
      double best = t_ground;
      int best_obj = -1, best_axis = -1;
      for (std::size_t i = 0; i < spec.objects.size(); ++i) {
        int axis = -1;
        if (auto t = detail::ray_box(dir, spec.objects[i], axis); t && *t < best) {
          best = *t;
          best_obj = static_cast<int>(i);
          best_axis = axis;
        }
      }
      if (best_obj >= 0) {
        const Object& o = spec.objects[static_cast<std::size_t>(best_obj)];
        const Vec3 hit{dir.x * best, dir.y * best, dir.z * best};
        f.clean_depth(u, v) = static_cast<float>(best * norm);
        f.seg.ids(u, v) = static_cast<std::uint8_t>(object_class[static_cast<std::size_t>(best_obj)]);
        f.image(u, v) = detail::object_colour(o, hit, best_axis);
        f.object_ids(u, v) = best_obj;
      }
    }

  // Ground truth and detections from visible pixels.
  struct Acc {
    int x0 = std::numeric_limits<int>::max(), y0 = std::numeric_limits<int>::max(), x1 = -1, y1 = -1;
    std::size_t n = 0;
    float nearest = std::numeric_limits<float>::infinity();
  };
  std::vector<Acc> acc(spec.objects.size());
  for (int v = 0; v < h; ++v)
    for (int u = 0; u < w; ++u) {
      const int id = f.object_ids(u, v);
      if (id < 0) continue;
      Acc& a = acc[static_cast<std::size_t>(id)];
      a.x0 = std::min(a.x0, u);
      a.y0 = std::min(a.y0, v);
      a.x1 = std::max(a.x1, u);
      a.y1 = std::max(a.y1, v);
      ++a.n;
      a.nearest = std::min(a.nearest, f.clean_depth(u, v));
    }
  for (std::size_t i = 0; i < spec.objects.size(); ++i) {
    const Acc& a = acc[i];
    if (a.n == 0) continue;
    const Object& o = spec.objects[i];
    const Box box{static_cast<double>(a.x0), static_cast<double>(a.y0), static_cast<double>(a.x1 - a.x0 + 1),
                  static_cast<double>(a.y1 - a.y0 + 1)};
    Detection det{static_cast<int>(i), o.label, 1.0, box, std::nullopt};
    if (spec.emit_light_state && o.label == kTrafficLightLabel) det.light_state = o.light_state.value_or(LightState::off);
    f.detections.push_back(det);
    std::optional<LightState> state;
    if (o.label == kTrafficLightLabel) state = o.light_state.value_or(LightState::off);
    f.truth.push_back({static_cast<int>(i), o.label, box, static_cast<double>(a.nearest), a.n, state});
  }

  f.lanes = project_lanes(cam, road);

  // Strips between consecutive lines, limited to rows both polylines span.
  f.lane_strips = Grid<std::uint8_t>(w, h, 0);
  std::vector<double> offsets;
  std::vector<std::pair<int, int>> spans;
  for (std::size_t k = 0; k < road.line_offsets_m.size(); ++k) {
    const auto it = std::find_if(f.lanes.begin(), f.lanes.end(),
                                 [&](const LaneInstance& l) { return l.instance_id == static_cast<int>(k); });
    if (it == f.lanes.end()) continue;
    offsets.push_back(road.line_offsets_m[k]);
    spans.emplace_back(it->points.back().y, it->points.front().y);
  }
  for (std::size_t k = 0; k + 1 < offsets.size(); ++k) {
    const int v0 = std::max(spans[k].first, spans[k + 1].first);
    const int v1 = std::min(spans[k].second, spans[k + 1].second);
    for (int v = std::max(v0, 0); v <= std::min(v1, h - 1); ++v) {
      if (v <= cam.cy) continue;
      const double z = cam.focal_px * cam.height_m / (v - cam.cy);
      for (int u = 0; u < w; ++u) {
        const double gx = (u - cam.cx) * z / cam.focal_px;
        if (gx > offsets[k] && gx < offsets[k + 1]) f.lane_strips(u, v) = static_cast<std::uint8_t>(k + 1);
      }
    }
  }

  f.depth = f.clean_depth;
  if (spec.noise.sigma_frac > 0 || spec.noise.outlier_frac > 0) {
    BinaryMask objects(w, h);
    for (std::size_t i = 0; i < objects.size(); ++i) objects.values()[i] = f.object_ids.values()[i] >= 0 ? 1 : 0;
    f.depth = inject_noise(f.clean_depth, f.background_depth, objects, spec.noise, spec.seed ^ 0x9e3779b97f4a7c15ULL);
  }
  return f;
}

struct SceneOptions {
  Camera camera;
  Road road;
  int max_vehicles = 3;
  std::vector<int> lanes{-1, 0, 1};  // lane indices, 3.5 m apart, 0 = ego lane
  double min_distance_m = 5.0;
  double max_distance_m = 60.0;
  Noise noise;
  bool emit_light_state = false;
};

inline const std::vector<std::string>& sign_names() {
  static const std::vector<std::string> names{"stop", "yield", "no_entry", "speed_limit_50", "no_parking"};
  return names;
}

/// Seeded random street scene. Vehicles sit on the road in the three lanes
/// with front faces between min and max distance; placements whose image
/// boxes would overlap an earlier vehicle are redrawn.
inline SceneSpec random_scene(std::uint64_t seed, const SceneOptions& opt = {}) {
  SceneRng rng(seed);
  SceneSpec spec;
  spec.seed = seed;
  spec.camera = opt.camera;
  spec.road = opt.road;
  spec.noise = opt.noise;
  spec.emit_light_state = opt.emit_light_state;
  const Camera& cam = opt.camera;
  const double ground_y = cam.height_m;

  auto image_box = [&](const Object& o) {
    const double zf = o.center.z - o.size.z / 2;
    const double zb = o.center.z + o.size.z / 2;
    double u0 = 1e9, u1 = -1e9, v0 = 1e9, v1 = -1e9;
    for (double x : {o.center.x - o.size.x / 2, o.center.x + o.size.x / 2})
      for (double y : {o.center.y - o.size.y / 2, o.center.y + o.size.y / 2})
        for (double z : {zf, zb}) {
          const double u = cam.cx + cam.focal_px * x / z, v = cam.cy + cam.focal_px * y / z;
          u0 = std::min(u0, u);
          u1 = std::max(u1, u);
          v0 = std::min(v0, v);
          v1 = std::max(v1, v);
        }
    return Box{u0 - 4, v0 - 4, u1 - u0 + 8, v1 - v0 + 8};
  };

  std::vector<Box> placed;
  const int vehicles = rng.range(1, std::max(1, opt.max_vehicles));
  for (int i = 0; i < vehicles; ++i) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const bool bus = rng.chance(0.25);
      const Vec3 size = bus ? Vec3{2.5, 3.0, 10.0} : Vec3{1.8, 1.5, 4.2};
      const int lane_index = opt.lanes.empty() ? 0 : opt.lanes[rng.below(opt.lanes.size())];
      const double lane = 3.5 * static_cast<double>(lane_index) + rng.uniform(-0.3, 0.3);
      const double front = rng.uniform(opt.min_distance_m, opt.max_distance_m);
      Object o{bus ? "bus" : "car", {lane, ground_y - size.y / 2, front + size.z / 2}, size, std::nullopt};
      const Box b = image_box(o);
      const bool clash = std::any_of(placed.begin(), placed.end(), [&](const Box& p) { return box_iou(p, b) > 0; });
      if (clash) continue;
      placed.push_back(b);
      spec.objects.push_back(o);
      break;
    }
  }
  if (rng.chance(0.7)) {
    const double side = rng.chance(0.5) ? -1.0 : 1.0;
    const LightState states[] = {LightState::red, LightState::yellow, LightState::green, LightState::off};
    Object light{"traffic_light", {side * 6.5, ground_y - 4.5, rng.uniform(15.0, 40.0)}, {0.4, 1.1, 0.3},
                 states[rng.below(4)]};
    spec.objects.push_back(light);
  }
  if (rng.chance(0.6)) {
    const double side = rng.chance(0.5) ? -1.0 : 1.0;
    const auto& names = sign_names();
    Object sign{"traffic_sign:" + names[rng.below(names.size())],
                {side * 7.0, ground_y - 2.5, rng.uniform(10.0, 40.0)}, {0.8, 0.8, 0.1}, std::nullopt};
    spec.objects.push_back(sign);
  }
  if (rng.chance(0.5)) {
    const double side = rng.chance(0.5) ? -1.0 : 1.0;
    Object person{"person", {side * 7.3, ground_y - 0.85, rng.uniform(8.0, 30.0)}, {0.5, 1.7, 0.4}, std::nullopt};
    spec.objects.push_back(person);
  }
  return spec;
}

}  // namespace synth
}  // namespace percept
