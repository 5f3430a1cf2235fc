#pragma once

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "percept/config.hpp"
#include "percept/depth_distance.hpp"
#include "percept/io.hpp"
#include "percept/roi_lane.hpp"
#include "percept/seg_refine.hpp"
#include "percept/traffic.hpp"

namespace percept {

struct FrameBundle {
  int frame_index = 0;
  std::optional<RgbImage> image;
  DepthMap depth;
  SegMap seg;
  std::vector<Detection> detections;
  std::vector<LaneInstance> lanes;
};

/// Stage names in execution order.
inline constexpr const char* kStages[] = {"refine", "roi", "lane_filter", "lane_regions",
                                          "distance", "traffic", "proximity"};

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct PerceptionFrameOutput {
  int frame_index = 0;
  bool failed = false;
  std::string error;

  RoiMask roi;
  std::vector<LaneInstance> filtered_lanes;
  std::vector<BinaryMask> lane_regions;
  RefinedSegMap refined;
  std::vector<Detection> detections;  // light states resolved
  std::map<int, LightReading> light_readings;
  std::vector<DistanceEstimate> estimates;
  std::vector<TrafficMessage> messages;
  std::optional<double> nearest_m;
  std::optional<LightState> light;  // state of the dominant light, if any

  std::vector<StageTiming> timings;  // execution order
  double total_ms = 0.0;
  std::optional<RgbImage> rendered;
  bool render_skipped = false;
};

inline void validate_bundle(const FrameBundle& b, const ClassRegistry& registry) {
  if (b.frame_index < 0) throw InputError("frame index must be non-negative");
  if (b.depth.width() != b.seg.width() || b.depth.height() != b.seg.height())
    throw InputError("depth and segmentation dimensions differ");
  if (b.image && (b.image->width() != b.depth.width() || b.image->height() != b.depth.height()))
    throw InputError("image and depth dimensions differ");
  if (auto bad = b.seg.first_unknown_id(registry))
    throw InputError("segmentation holds unregistered class id " + std::to_string(*bad));
  for (const auto& d : b.detections)
    if (!(d.box.w > 0 && d.box.h > 0) || !(d.score >= 0 && d.score <= 1))
      throw InvalidDetection("detection " + std::to_string(d.id) + " violates box or score bounds");
}

namespace detail {

class StageClock {
 public:
  using clock = std::chrono::steady_clock;

  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink), start_(clock::now()), mark_(start_) {}

  void lap(const char* stage) {
    const auto now = clock::now();
    sink_.push_back({stage, std::chrono::duration<double, std::milli>(now - mark_).count()});
    mark_ = now;
  }

  double total_ms() const { return std::chrono::duration<double, std::milli>(clock::now() - start_).count(); }

 private:
  std::vector<StageTiming>& sink_;
  clock::time_point start_;
  clock::time_point mark_;
};

inline bool contains(const std::vector<std::string>& names, const std::string& n) {
  return std::find(names.begin(), names.end(), n) != names.end();
}

}  // namespace detail

/// Runs every stage on one frame. Module input errors propagate to the caller.
inline PerceptionFrameOutput process_frame_or_throw(const FrameBundle& b, const Config& cfg) {
  validate_bundle(b, cfg.registry);
  PerceptionFrameOutput out;
  out.frame_index = b.frame_index;
  detail::StageClock clock(out.timings);
  const int w = b.depth.width();

  const auto refine_se = StructuringElement::disc(cfg.refine_radius_for(w));
  out.refined = refine_all(b.seg, cfg.refine_ids(), refine_se, cfg.min_area_frac);
  clock.lap("refine");

  const auto roi_se = StructuringElement::disc(cfg.roi_radius_for(w));
  out.roi = build_dynamic_roi(b.seg, cfg.registry.id(cfg.road_class), roi_se, b.frame_index);
  clock.lap("roi");

  out.filtered_lanes = filter_lanes(b.lanes, out.roi, cfg.keep_fraction);
  clock.lap("lane_filter");

  out.lane_regions = lane_regions(out.filtered_lanes, out.roi);
  clock.lap("lane_regions");

  for (const auto& d : b.detections)
    if (detail::contains(cfg.distance_classes, registry_label(d)))
      out.estimates.push_back(estimate_distance(b.depth, out.refined, cfg.registry, d, cfg.distance));
  clock.lap("distance");

  out.detections = b.detections;
  const RgbImage* image = b.image ? &*b.image : nullptr;
  for (auto& d : out.detections) {
    if (d.label != kTrafficLightLabel) continue;
    const LightReading r = classify_light_state(image, d, cfg.light);
    out.light_readings[d.id] = r;
    d.light_state = r.state;
  }
  if (const Detection* light = dominant_light(out.detections)) {
    out.light = *light->light_state;
    if (auto m = light_message(*light->light_state, light->id)) out.messages.push_back(*m);
  }
  for (auto& m : sign_messages(out.detections)) out.messages.push_back(std::move(m));
  clock.lap("traffic");

  auto prox = proximity_warnings(out.estimates, cfg.proximity_threshold_m);
  for (auto& m : prox.messages) out.messages.push_back(std::move(m));
  out.nearest_m = prox.nearest;
  clock.lap("proximity");

  out.total_ms = clock.total_ms();
  return out;
}

inline PerceptionFrameOutput failed_frame(int frame_index, std::string error) {
  PerceptionFrameOutput out;
  out.frame_index = frame_index;
  out.failed = true;
  out.error = std::move(error);
  return out;
}

/// As process_frame_or_throw, but module input errors become a failed-frame record.
inline PerceptionFrameOutput process_frame(const FrameBundle& b, const Config& cfg) {
  try {
    return process_frame_or_throw(b, cfg);
  } catch (const InputError& e) {
    return failed_frame(b.frame_index, e.what());
  } catch (const std::invalid_argument& e) {
    return failed_frame(b.frame_index, e.what());
  }
}

// ---------------------------------------------------------------------------
// Bundle files.

/// Registry for a bundle directory: its classes.txt when present, else `fallback`.
inline ClassRegistry bundle_registry(const std::filesystem::path& dir, const ClassRegistry& fallback) {
  const auto path = dir / io::kRegistryFile;
  if (!std::filesystem::exists(path)) return fallback;
  return ClassRegistry::parse(io::read_text(path), path.string());
}

inline FrameBundle read_bundle(const std::filesystem::path& dir, int index, const ClassRegistry& registry) {
  FrameBundle b;
  b.frame_index = index;
  const auto depth_path = io::frame_file(dir, index, io::kDepthSuffix);
  const auto seg_path = io::frame_file(dir, index, io::kSegSuffix);
  b.depth = io::read_depth(depth_path);
  b.seg = io::read_seg(seg_path, registry);
  if (b.seg.width() != b.depth.width() || b.seg.height() != b.depth.height())
    throw FormatError(seg_path.string(), 3,
                      "dimension mismatch: " + std::to_string(b.seg.width()) + "x" + std::to_string(b.seg.height()) +
                          " vs depth " + std::to_string(b.depth.width()) + "x" + std::to_string(b.depth.height()));
  const auto det_path = io::frame_file(dir, index, io::kDetSuffix);
  b.detections = io::parse_detections(io::read_text(det_path), det_path.string());
  const auto lanes_path = io::frame_file(dir, index, io::kLanesSuffix);
  b.lanes = io::parse_lanes(io::read_text(lanes_path), lanes_path.string());
  const auto image_path = io::frame_file(dir, index, io::kImageSuffix);
  if (std::filesystem::exists(image_path)) {
    b.image = io::read_ppm(image_path);
    if (b.image->width() != b.depth.width() || b.image->height() != b.depth.height())
      throw FormatError(image_path.string(), 3, "dimension mismatch with depth");
  }
  return b;
}

inline void write_bundle(const std::filesystem::path& dir, const FrameBundle& b) {
  std::filesystem::create_directories(dir);
  io::write_depth(io::frame_file(dir, b.frame_index, io::kDepthSuffix), b.depth);
  io::write_pgm(io::frame_file(dir, b.frame_index, io::kSegSuffix), b.seg.ids);
  io::write_text(io::frame_file(dir, b.frame_index, io::kDetSuffix), io::serialize_detections(b.detections));
  io::write_text(io::frame_file(dir, b.frame_index, io::kLanesSuffix), io::lanes_to_json(b.lanes).dump() + "\n");
  if (b.image) io::write_ppm(io::frame_file(dir, b.frame_index, io::kImageSuffix), *b.image);
}

inline io::Json optional_number(const std::optional<double>& v) {
  return v ? io::Json(io::canonical(*v)) : io::Json(nullptr);
}

/// Label image of the lane regions: 0 outside, k+1 inside region k.
inline Grid<std::uint8_t> region_labels(const PerceptionFrameOutput& out, int w, int h) {
  Grid<std::uint8_t> labels(w, h, 0);
  for (std::size_t k = 0; k < out.lane_regions.size() && k < 255; ++k)
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (out.lane_regions[k].values()[i]) labels.values()[i] = static_cast<std::uint8_t>(k + 1);
  return labels;
}

/// Frame record. Timings are left out so repeated runs are byte-identical.
inline io::Json output_to_json(const PerceptionFrameOutput& out, const ClassRegistry& registry) {
  using io::Json;
  if (out.failed) return {{"frame", out.frame_index}, {"status", "failed"}, {"error", out.error}};

  Json hulls = Json::object();
  for (const auto& [id, cls] : out.refined.classes) {
    Json list = Json::array();
    for (const auto& h : cls.hulls) {
      Json verts = Json::array();
      for (auto p : h.vertices) verts.push_back({p.x, p.y});
      list.push_back(std::move(verts));
    }
    hulls[registry.name(id)] = std::move(list);
  }

  Json estimates = Json::array();
  for (const auto& e : out.estimates)
    estimates.push_back({{"detection_id", e.detection_id},
                         {"meters", optional_number(e.meters)},
                         {"inlier_count", e.inlier_count},
                         {"trace",
                          {{"crop_pixels", e.trace.crop_pixels},
                           {"masked_valid", e.trace.masked_valid},
                           {"pooled_valid", e.trace.pooled_valid},
                           {"inliers", e.trace.inliers},
                           {"grouped_values", e.trace.grouped_values},
                           {"mask_fallback", e.trace.mask_fallback}}}});

  Json messages = Json::array();
  for (const auto& m : out.messages) {
    Json j = {{"kind", std::string(to_string(m.kind))}, {"text", m.text}, {"source", m.source_detection_id}};
    if (m.meters) j["meters"] = io::canonical(*m.meters);
    messages.push_back(std::move(j));
  }

  Json detections = Json::array();
  for (const auto& d : out.detections) {
    Json j = io::detection_to_json(d);
    if (auto it = out.light_readings.find(d.id); it != out.light_readings.end() && it->second.low_confidence)
      j["low_confidence"] = true;
    detections.push_back(std::move(j));
  }

  Json areas = Json::array();
  for (const auto& r : out.lane_regions) areas.push_back(count_ones(r));

  Json j = {{"frame", out.frame_index},
            {"status", "ok"},
            {"roi", {{"degenerate", out.roi.degenerate}, {"pixels", count_ones(out.roi.mask)}}},
            {"lanes", io::lanes_to_json(out.filtered_lanes)["lanes"]},
            {"lane_region_pixels", std::move(areas)},
            {"hulls", std::move(hulls)},
            {"detections", std::move(detections)},
            {"estimates", std::move(estimates)},
            {"messages", std::move(messages)},
            {"nearest_m", optional_number(out.nearest_m)},
            {"light", out.light ? Json(std::string(to_string(*out.light))) : Json(nullptr)}};
  if (out.render_skipped) j["render"] = "skipped: no image";
  return j;
}

inline void write_output(const std::filesystem::path& dir, const PerceptionFrameOutput& out,
                         const ClassRegistry& registry) {
  std::filesystem::create_directories(dir);
  io::write_text(io::frame_file(dir, out.frame_index, io::kOutputSuffix), output_to_json(out, registry).dump(1) + "\n");
  if (out.failed) return;
  const int w = out.roi.mask.width(), h = out.roi.mask.height();
  io::write_pgm(io::frame_file(dir, out.frame_index, io::kRegionsSuffix), region_labels(out, w, h));
  io::write_pgm(io::frame_file(dir, out.frame_index, io::kRefinedSuffix), out.refined.seg.ids);
  if (out.rendered) io::write_ppm(io::frame_file(dir, out.frame_index, io::kRenderSuffix), *out.rendered);
}

// ---------------------------------------------------------------------------
// Directory runs.

struct RunSummary {
  std::size_t frames = 0;
  std::size_t failed = 0;
  std::size_t format_errors = 0;
  std::vector<std::string> errors;
};

/// Per-frame hook run after processing and before writing (rendering).
using FrameHook = std::function<void(const FrameBundle&, PerceptionFrameOutput&)>;

/// Processes every frame in `input`, up to cfg.workers at a time, and writes
/// results to `output` in frame order. Unreadable frames become failed
/// records; later frames still run.
inline RunSummary run_directory(const std::filesystem::path& input, const std::filesystem::path& output,
                                const Config& cfg, const FrameHook& hook = {}) {
  RunSummary summary;
  const ClassRegistry registry = bundle_registry(input, cfg.registry);
  Config frame_cfg = cfg;
  frame_cfg.registry = registry;
  std::filesystem::create_directories(output);

  const std::vector<int> frames = io::list_frames(input);
  summary.frames = frames.size();
  const std::size_t batch = static_cast<std::size_t>(std::max(1, cfg.workers));

  struct Slot {
    std::optional<FrameBundle> bundle;
    PerceptionFrameOutput out;
    bool format_error = false;
  };

  auto work = [&](int index, Slot& slot) {
    try {
      slot.bundle = read_bundle(input, index, registry);
    } catch (const FormatError& e) {
      slot.out = failed_frame(index, e.what());
      slot.format_error = true;
      return;
    }
    slot.out = process_frame(*slot.bundle, frame_cfg);
    if (hook && !slot.out.failed) hook(*slot.bundle, slot.out);
  };

  for (std::size_t start = 0; start < frames.size(); start += batch) {
    const std::size_t n = std::min(batch, frames.size() - start);
    std::vector<Slot> slots(n);
    if (n == 1) {
      work(frames[start], slots[0]);
    } else {
      std::vector<std::jthread> threads;
      for (std::size_t i = 0; i < n; ++i) threads.emplace_back([&, i] { work(frames[start + i], slots[i]); });
    }
    for (auto& slot : slots) {
      write_output(output, slot.out, registry);
      if (slot.out.failed) {
        ++summary.failed;
        summary.errors.push_back(slot.out.error);
      }
      if (slot.format_error) ++summary.format_errors;
    }
  }
  return summary;
}

}  // namespace percept
