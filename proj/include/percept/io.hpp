#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "percept/detection.hpp"
#include "percept/errors.hpp"
#include "percept/grid.hpp"
#include "percept/registry.hpp"
#include "percept/roi_lane.hpp"

namespace percept::io {

namespace fs = std::filesystem;
using Json = nlohmann::json;

static_assert(std::endian::native == std::endian::little, "interchange writers assume a little-endian host");

/// Text formats carry floats rounded to 6 significant digits.
inline double canonical(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

inline std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string(), 0, "missing or unreadable file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const fs::path& path) {
  const auto bytes = read_file(path);
  return {bytes.begin(), bytes.end()};
}

/// Writes to a sibling temporary, then renames over the target.
inline void write_file(const fs::path& path, const void* data, std::size_t size) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw Error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

inline void write_text(const fs::path& path, const std::string& text) { write_file(path, text.data(), text.size()); }

// ---------------------------------------------------------------------------
// Depth: "DPTH", version 0x01, u32 width, u32 height (LE), width*height f32 LE.

inline constexpr char kDepthMagic[4] = {'D', 'P', 'T', 'H'};
inline constexpr std::uint8_t kDepthVersion = 0x01;
inline constexpr std::size_t kDepthHeader = 13;

inline std::vector<std::uint8_t> encode_depth(const DepthMap& d) {
  std::vector<std::uint8_t> out(kDepthHeader + d.size() * 4);
  std::memcpy(out.data(), kDepthMagic, 4);
  out[4] = kDepthVersion;
  const auto w = static_cast<std::uint32_t>(d.width()), h = static_cast<std::uint32_t>(d.height());
  std::memcpy(out.data() + 5, &w, 4);
  std::memcpy(out.data() + 9, &h, 4);
  std::memcpy(out.data() + kDepthHeader, d.values().data(), d.size() * 4);
  return out;
}

inline DepthMap decode_depth(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < kDepthHeader)
    throw FormatError(name, bytes.size(),
                      "truncated header: expected " + std::to_string(kDepthHeader) + " bytes, got " +
                          std::to_string(bytes.size()));
  if (std::memcmp(bytes.data(), kDepthMagic, 4) != 0) throw FormatError(name, 0, "magic mismatch: expected DPTH");
  if (bytes[4] != kDepthVersion)
    throw FormatError(name, 4, "unsupported version " + std::to_string(bytes[4]) + ", expected 1");
  std::uint32_t w = 0, h = 0;
  std::memcpy(&w, bytes.data() + 5, 4);
  std::memcpy(&h, bytes.data() + 9, 4);
  if (w == 0 || h == 0 || w > 1u << 15 || h > 1u << 15)
    throw FormatError(name, w == 0 ? 5 : 9, "dimensions must lie in [1, 32768]");
  const std::uint64_t expected = kDepthHeader + 4ull * w * h;
  if (bytes.size() != expected)
    throw FormatError(name, bytes.size(),
                      "payload size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(bytes.size()));
  DepthMap d(static_cast<int>(w), static_cast<int>(h));
  std::memcpy(d.values().data(), bytes.data() + kDepthHeader, d.size() * 4);
  return d;
}

inline DepthMap read_depth(const fs::path& path) { return decode_depth(read_file(path), path.string()); }

inline void write_depth(const fs::path& path, const DepthMap& d) {
  const auto bytes = encode_depth(d);
  write_file(path, bytes.data(), bytes.size());
}

// ---------------------------------------------------------------------------
// Netpbm P5 (maxval 255) and P6.

namespace detail {

struct NetpbmHeader {
  int width = 0;
  int height = 0;
  std::size_t data_offset = 0;
};

inline NetpbmHeader parse_netpbm(const std::vector<std::uint8_t>& b, const std::string& name, const char* magic) {
  if (b.size() < 2 || b[0] != magic[0] || b[1] != magic[1])
    throw FormatError(name, 0, std::string("magic mismatch: expected ") + magic);
  std::size_t pos = 2;
  long values[3] = {};
  for (int i = 0; i < 3; ++i) {
    for (;;) {
      while (pos < b.size() && std::isspace(b[pos])) ++pos;
      if (pos < b.size() && b[pos] == '#') {
        while (pos < b.size() && b[pos] != '\n') ++pos;
        continue;
      }
      break;
    }
    const std::size_t start = pos;
    long v = 0;
    while (pos < b.size() && std::isdigit(b[pos]) && v < 1'000'000) v = v * 10 + (b[pos++] - '0');
    if (pos == start) throw FormatError(name, pos, "expected an unsigned integer in header");
    values[i] = v;
  }
  if (pos >= b.size() || !std::isspace(b[pos])) throw FormatError(name, pos, "expected whitespace after maxval");
  ++pos;
  if (values[0] < 1 || values[1] < 1 || values[0] > 32768 || values[1] > 32768)
    throw FormatError(name, 3, "dimensions must lie in [1, 32768]");
  if (values[2] != 255) throw FormatError(name, pos - 1, "maxval must be 255");
  return {static_cast<int>(values[0]), static_cast<int>(values[1]), pos};
}

inline std::string netpbm_header(const char* magic, int w, int h) {
  return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

}  // namespace detail

inline Grid<std::uint8_t> decode_pgm(const std::vector<std::uint8_t>& b, const std::string& name) {
  const auto hdr = detail::parse_netpbm(b, name, "P5");
  const std::size_t expected = hdr.data_offset + static_cast<std::size_t>(hdr.width) * hdr.height;
  if (b.size() != expected)
    throw FormatError(name, b.size(),
                      "payload size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(b.size()));
  return Grid<std::uint8_t>(hdr.width, hdr.height,
                            std::vector<std::uint8_t>(b.begin() + static_cast<std::ptrdiff_t>(hdr.data_offset), b.end()));
}

inline Grid<std::uint8_t> read_pgm(const fs::path& path) { return decode_pgm(read_file(path), path.string()); }

inline void write_pgm(const fs::path& path, const Grid<std::uint8_t>& g) {
  std::string out = detail::netpbm_header("P5", g.width(), g.height());
  out.append(reinterpret_cast<const char*>(g.values().data()), g.size());
  write_text(path, out);
}

inline RgbImage decode_ppm(const std::vector<std::uint8_t>& b, const std::string& name) {
  const auto hdr = detail::parse_netpbm(b, name, "P6");
  const std::size_t expected = hdr.data_offset + 3ull * hdr.width * hdr.height;
  if (b.size() != expected)
    throw FormatError(name, b.size(),
                      "payload size mismatch: expected " + std::to_string(expected) + " bytes, got " +
                          std::to_string(b.size()));
  RgbImage img(hdr.width, hdr.height);
  const std::uint8_t* p = b.data() + hdr.data_offset;
  for (auto& px : img.values()) {
    px = {p[0], p[1], p[2]};
    p += 3;
  }
  return img;
}

inline RgbImage read_ppm(const fs::path& path) { return decode_ppm(read_file(path), path.string()); }

inline void write_ppm(const fs::path& path, const RgbImage& img) {
  std::string out = detail::netpbm_header("P6", img.width(), img.height());
  out.reserve(out.size() + img.size() * 3);
  for (const auto& px : img.values()) {
    out.push_back(static_cast<char>(px.r));
    out.push_back(static_cast<char>(px.g));
    out.push_back(static_cast<char>(px.b));
  }
  write_text(path, out);
}

/// Segmentation map; every id must be registered.
inline SegMap read_seg(const fs::path& path, const ClassRegistry& registry) {
  const auto bytes = read_file(path);
  SegMap seg{decode_pgm(bytes, path.string())};
  const std::size_t header = bytes.size() - seg.ids.size();
  if (auto bad = seg.first_unknown_id(registry)) {
    const auto values = seg.ids.values();
    const auto at = static_cast<std::size_t>(std::find(values.begin(), values.end(), *bad) - values.begin());
    throw FormatError(path.string(), header + at, "unknown class id " + std::to_string(*bad));
  }
  return seg;
}

// ---------------------------------------------------------------------------
// Detections: one JSON object per line.

inline Json detection_to_json(const Detection& d) {
  Json j = {{"id", d.id},
            {"class", d.label},
            {"score", canonical(d.score)},
            {"bbox", {canonical(d.box.x), canonical(d.box.y), canonical(d.box.w), canonical(d.box.h)}}};
  if (d.light_state) j["light_state"] = std::string(to_string(*d.light_state));
  return j;
}

inline Detection detection_from_json(const Json& j, int default_id, const std::string& name, std::uint64_t line) {
  auto fail = [&](const std::string& rule) { throw FormatError(name, line, rule); };
  if (!j.is_object()) fail("detection record must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "id" && key != "class" && key != "score" && key != "bbox" && key != "light_state")
      fail("unknown detection field '" + key + "'");
  Detection d;
  d.id = default_id;
  if (j.contains("id")) {
    if (!j["id"].is_number_integer()) fail("id must be an integer");
    d.id = j["id"].get<int>();
  }
  if (!j.contains("class") || !j["class"].is_string() || j["class"].get<std::string>().empty())
    fail("class must be a non-empty string");
  d.label = j["class"].get<std::string>();
  if (!j.contains("score") || !j["score"].is_number()) fail("score must be a number");
  d.score = j["score"].get<double>();
  if (!(d.score >= 0.0 && d.score <= 1.0)) fail("score must lie in [0,1]");
  if (!j.contains("bbox") || !j["bbox"].is_array() || j["bbox"].size() != 4) fail("bbox must be [x, y, w, h]");
  for (const auto& v : j["bbox"])
    if (!v.is_number()) fail("bbox entries must be numbers");
  d.box = {j["bbox"][0].get<double>(), j["bbox"][1].get<double>(), j["bbox"][2].get<double>(),
           j["bbox"][3].get<double>()};
  if (!(d.box.w > 0 && d.box.h > 0)) fail("bbox width and height must be positive");
  if (j.contains("light_state")) {
    if (!j["light_state"].is_string()) fail("light_state must be a string");
    auto s = parse_light_state(j["light_state"].get<std::string>());
    if (!s) fail("light_state must be one of red, yellow, green, off");
    d.light_state = *s;
  }
  return d;
}

inline std::vector<Detection> parse_detections(const std::string& text, const std::string& name) {
  std::vector<Detection> out;
  std::istringstream in(text);
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(name, lineno, std::string("invalid JSON: ") + e.what());
    }
    out.push_back(detection_from_json(j, static_cast<int>(out.size()), name, lineno));
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = i + 1; k < out.size(); ++k)
      if (out[i].id == out[k].id) throw FormatError(name, k + 1, "duplicate detection id " + std::to_string(out[k].id));
  return out;
}

inline std::string serialize_detections(const std::vector<Detection>& dets) {
  std::string out;
  for (const auto& d : dets) out += detection_to_json(d).dump() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Lanes: {"lanes": [{"id": k, "points": [[x, y], ...]}, ...]}

inline Json lanes_to_json(const std::vector<LaneInstance>& lanes) {
  Json arr = Json::array();
  for (const auto& l : lanes) {
    Json pts = Json::array();
    for (auto p : l.points) pts.push_back({p.x, p.y});
    arr.push_back({{"id", l.instance_id}, {"points", std::move(pts)}});
  }
  return {{"lanes", std::move(arr)}};
}

inline std::vector<LaneInstance> lanes_from_json(const Json& j, const std::string& name) {
  auto fail = [&](const std::string& rule) { throw FormatError(name, 0, rule); };
  if (!j.is_object() || !j.contains("lanes") || !j["lanes"].is_array()) fail("expected {\"lanes\": [...]}");
  std::vector<LaneInstance> out;
  for (const auto& l : j["lanes"]) {
    if (!l.is_object() || !l.contains("points") || !l["points"].is_array()) fail("lane must carry a points array");
    LaneInstance lane;
    lane.instance_id = static_cast<int>(out.size());
    if (l.contains("id")) {
      if (!l["id"].is_number_integer()) fail("lane id must be an integer");
      lane.instance_id = l["id"].get<int>();
    }
    for (const auto& p : l["points"]) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        fail("lane point must be [x, y]");
      lane.points.push_back({static_cast<int>(std::lround(p[0].get<double>())),
                             static_cast<int>(std::lround(p[1].get<double>()))});
    }
    if (lane.points.size() < 2) fail("lane " + std::to_string(lane.instance_id) + " has fewer than 2 points");
    out.push_back(std::move(lane));
  }
  return out;
}

inline std::vector<LaneInstance> parse_lanes(const std::string& text, const std::string& name) {
  try {
    return lanes_from_json(Json::parse(text), name);
  } catch (const Json::parse_error& e) {
    throw FormatError(name, e.byte, std::string("invalid JSON: ") + e.what());
  }
}

inline Json parse_json_file(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string(), e.byte, std::string("invalid JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Frame file naming inside a bundle directory.

inline std::string frame_stem(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame_%06d", index);
  return buf;
}

inline fs::path frame_file(const fs::path& dir, int index, const char* suffix) {
  return dir / (frame_stem(index) + suffix);
}

inline constexpr const char* kDepthSuffix = ".depth";
inline constexpr const char* kSegSuffix = ".seg.pgm";
inline constexpr const char* kDetSuffix = ".det.jsonl";
inline constexpr const char* kLanesSuffix = ".lanes.json";
inline constexpr const char* kImageSuffix = ".ppm";
inline constexpr const char* kTruthSuffix = ".gt.json";
inline constexpr const char* kTruthLanesSuffix = ".gt_lanes.pgm";
inline constexpr const char* kOutputSuffix = ".out.json";
inline constexpr const char* kRegionsSuffix = ".lane_regions.pgm";
inline constexpr const char* kRefinedSuffix = ".refined.pgm";
inline constexpr const char* kRenderSuffix = ".render.ppm";
inline constexpr const char* kRegistryFile = "classes.txt";

/// Indices of every frame_NNNNNN<suffix> in `dir`, ascending.
inline std::vector<int> list_frames(const fs::path& dir, const std::string& suffix = kDepthSuffix) {
  std::vector<int> out;
  if (!fs::is_directory(dir)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() != 12 + suffix.size() || !name.starts_with("frame_") || !name.ends_with(suffix)) continue;
    const std::string digits = name.substr(6, 6);
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      continue;
    out.push_back(std::stoi(digits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace percept::io
