#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "percept/io.hpp"
#include "percept/pipeline.hpp"
#include "percept/synth.hpp"

namespace percept::synth {

inline io::Json truth_to_json(int frame_index, const std::vector<GroundTruthObject>& truth) {
  io::Json objects = io::Json::array();
  for (const auto& t : truth) {
    io::Json j = {{"id", t.id},
                  {"class", t.label},
                  {"bbox", {io::canonical(t.box.x), io::canonical(t.box.y), io::canonical(t.box.w), io::canonical(t.box.h)}},
                  {"distance_m", io::canonical(t.distance_m)},
                  {"pixels", t.pixels}};
    if (t.light_state) j["light_state"] = std::string(to_string(*t.light_state));
    objects.push_back(std::move(j));
  }
  return {{"frame", frame_index}, {"objects", std::move(objects)}};
}

inline std::vector<GroundTruthObject> truth_from_json(const io::Json& j, const std::string& name) {
  auto fail = [&](const std::string& rule) { throw FormatError(name, 0, rule); };
  if (!j.is_object() || !j.contains("objects") || !j["objects"].is_array()) fail("expected {\"objects\": [...]}");
  std::vector<GroundTruthObject> out;
  for (const auto& o : j["objects"]) {
    if (!o.is_object() || !o.contains("class") || !o.contains("bbox") || !o.contains("distance_m"))
      fail("object needs class, bbox and distance_m");
    GroundTruthObject t;
    t.id = o.value("id", static_cast<int>(out.size()));
    t.label = o["class"].get<std::string>();
    const auto& b = o["bbox"];
    if (!b.is_array() || b.size() != 4) fail("bbox must be [x, y, w, h]");
    t.box = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    t.distance_m = o["distance_m"].get<double>();
    t.pixels = o.value("pixels", std::size_t{0});
    if (o.contains("light_state")) {
      auto s = parse_light_state(o["light_state"].get<std::string>());
      if (!s) fail("bad light_state");
      t.light_state = s;
    }
    out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<GroundTruthObject> read_truth(const std::filesystem::path& path) {
  try {
    return truth_from_json(io::parse_json_file(path), path.string());
  } catch (const io::Json::exception& e) {
    throw FormatError(path.string(), 0, e.what());
  }
}

inline FrameBundle to_bundle(int frame_index, const Frame& f) {
  return {frame_index, f.image, f.depth, f.seg, f.detections, f.lanes};
}

/// Input bundle plus the ground-truth annex and lane strips.
inline void write_frame(const std::filesystem::path& dir, int frame_index, const Frame& f) {
  write_bundle(dir, to_bundle(frame_index, f));
  io::write_text(io::frame_file(dir, frame_index, io::kTruthSuffix), truth_to_json(frame_index, f.truth).dump(1) + "\n");
  io::write_pgm(io::frame_file(dir, frame_index, io::kTruthLanesSuffix), f.lane_strips);
}

inline void write_registry(const std::filesystem::path& dir, const ClassRegistry& registry) {
  std::filesystem::create_directories(dir);
  io::write_text(dir / io::kRegistryFile, registry.serialize());
}

/// Seed of scene `i` in a run seeded with `seed`.
inline std::uint64_t scene_seed(std::uint64_t seed, int i) { return seed * 1000003ULL + static_cast<std::uint64_t>(i); }

/// Renders `scenes` random scenes into `dir` as frames 0..scenes-1.
inline void write_scenes(const std::filesystem::path& dir, int scenes, std::uint64_t seed, const SceneOptions& opt,
                         const ClassRegistry& registry = ClassRegistry::defaults()) {
  write_registry(dir, registry);
  for (int i = 0; i < scenes; ++i) write_frame(dir, i, render_scene(random_scene(scene_seed(seed, i), opt), registry));
}

}  // namespace percept::synth
