#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "percept/depth_distance.hpp"
#include "percept/errors.hpp"
#include "percept/registry.hpp"
#include "percept/roi_lane.hpp"
#include "percept/traffic.hpp"

namespace percept {

inline constexpr const char* kConfigEnv = "PERCEPT_CONFIG";

struct Config {
  ClassRegistry registry = ClassRegistry::defaults();
  std::string road_class = "road";
  std::string sidewalk_class = "sidewalk";

  std::optional<int> roi_se_radius;  // nullopt: scaled with frame width
  double keep_fraction = 0.5;

  std::optional<int> refine_se_radius;
  double min_area_frac = 0.002;
  std::vector<std::string> refine_classes{"sidewalk", "car", "bus"};

  std::vector<std::string> distance_classes{"car", "bus"};
  DistanceConfig distance;

  double proximity_threshold_m = 10.0;
  LightHeuristic light;

  double iou_threshold = 0.5;
  double ra_threshold = 0.8;

  int workers = 1;

  int roi_radius_for(int width) const { return roi_se_radius.value_or(default_se_radius(width)); }
  int refine_radius_for(int width) const { return refine_se_radius.value_or(default_se_radius(width)); }

  std::vector<int> refine_ids() const {
    std::vector<int> ids;
    for (const auto& n : refine_classes) ids.push_back(registry.id(n));
    return ids;
  }
};

namespace detail {

using Json = nlohmann::json;

class ConfigReader {
 public:
  ConfigReader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("must be an object");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError("config " + path_ + ": " + what); }

  /// Rejects keys outside `allowed` so typos do not silently fall back to defaults.
  void only(std::initializer_list<const char*> allowed) const {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : j_.items())
      if (!ok.count(key)) fail("unknown key '" + key + "'");
  }

  bool has(const char* key) const { return j_.contains(key); }

  ConfigReader section(const char* key) const {
    static const Json empty = Json::object();
    return {has(key) ? j_.at(key) : empty, path_ + "." + key};
  }

  const Json& raw(const char* key) const { return j_.at(key); }

  void number(const char* key, double& out, double lo, double hi, bool lo_open = false) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number()) fail(std::string(key) + " must be a number");
    const double x = v.get<double>();
    if (!(lo_open ? x > lo : x >= lo) || !(x <= hi)) fail(std::string(key) + " out of range");
    out = x;
  }

  void integer(const char* key, int& out, int lo, int hi) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_number_integer()) fail(std::string(key) + " must be an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) fail(std::string(key) + " out of range");
    out = static_cast<int>(x);
  }

  void radius(const char* key, std::optional<int>& out) const {
    if (!has(key)) return;
    if (j_.at(key).is_null()) {
      out.reset();
      return;
    }
    int r = 0;
    integer(key, r, 1, 64);
    out = r;
  }

  void names(const char* key, std::vector<std::string>& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array()) fail(std::string(key) + " must be an array of class names");
    out.clear();
    for (const auto& e : v) {
      if (!e.is_string()) fail(std::string(key) + " must be an array of class names");
      out.push_back(e.get<std::string>());
    }
  }

  void band(const char* key, HueBand& out) const {
    if (!has(key)) return;
    const Json& v = j_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(std::string(key) + " must be [lo, hi] in degrees");
    const double lo = v[0].get<double>(), hi = v[1].get<double>();
    if (lo < 0 || lo > 360 || hi < 0 || hi > 360) fail(std::string(key) + " out of range");
    out = {lo, hi};
  }

 private:
  const Json& j_;
  std::string path_;
};

}  // namespace detail

/// Parses a JSON config document. Absent keys keep their defaults.
inline Config parse_config(const std::string& text, const std::string& source = "<config>") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config " + source + ": invalid JSON: " + e.what());
  }
  Config c;
  const detail::ConfigReader root(j, source);
  root.only({"classes", "roi", "refine", "distance", "traffic", "eval", "runtime"});

  if (root.has("classes")) {
    const auto& cls = root.raw("classes");
    if (!cls.is_object()) root.fail("classes must map name to id");
    ClassRegistry reg;
    try {
      for (const auto& [name, id] : cls.items()) {
        if (!id.is_number_integer() || id.get<long long>() < 0 || id.get<long long>() > 255)
          root.fail("class id for '" + name + "' must be an integer in [0, 255]");
        reg.add(name, id.get<int>());
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      root.fail(e.what());
    }
    if (!reg.find("background")) {
      if (reg.has_id(0)) root.fail("class id 0 is reserved for background");
      reg.add("background", 0);
    }
    c.registry = std::move(reg);
  }

  const auto roi = root.section("roi");
  roi.only({"se_radius", "keep_fraction", "road_class"});
  roi.radius("se_radius", c.roi_se_radius);
  roi.number("keep_fraction", c.keep_fraction, 0.0, 1.0);
  if (roi.has("road_class")) {
    if (!roi.raw("road_class").is_string()) roi.fail("road_class must be a string");
    c.road_class = roi.raw("road_class").get<std::string>();
  }

  const auto refine = root.section("refine");
  refine.only({"se_radius", "min_area_frac", "classes", "sidewalk_class"});
  refine.radius("se_radius", c.refine_se_radius);
  refine.number("min_area_frac", c.min_area_frac, 0.0, 1.0, true);
  if (c.min_area_frac >= 1.0) refine.fail("min_area_frac must be below 1");
  refine.names("classes", c.refine_classes);
  if (refine.has("sidewalk_class")) {
    if (!refine.raw("sidewalk_class").is_string()) refine.fail("sidewalk_class must be a string");
    c.sidewalk_class = refine.raw("sidewalk_class").get<std::string>();
  }

  const auto dist = root.section("distance");
  dist.only({"classes", "min_pool_kernel", "average_kernels", "sigma_multiplier", "min_points", "depth_scale"});
  dist.names("classes", c.distance_classes);
  dist.integer("min_pool_kernel", c.distance.min_pool_kernel, 1, 64);
  if (dist.has("average_kernels")) {
    const auto& v = dist.raw("average_kernels");
    if (!v.is_array() || v.empty()) dist.fail("average_kernels must be a non-empty array");
    c.distance.average_kernels.clear();
    for (const auto& k : v) {
      if (!k.is_number_integer() || k.get<int>() < 1 || k.get<int>() > 64)
        dist.fail("average_kernels entries must be integers in [1, 64]");
      c.distance.average_kernels.push_back(k.get<int>());
    }
  }
  dist.number("sigma_multiplier", c.distance.sigma_multiplier, 0.0, 100.0, true);
  int min_points = static_cast<int>(c.distance.min_points);
  dist.integer("min_points", min_points, 1, 1 << 20);
  c.distance.min_points = static_cast<std::size_t>(min_points);
  dist.number("depth_scale", c.distance.depth_scale, 0.0, 1e6, true);

  const auto traffic = root.section("traffic");
  traffic.only({"proximity_threshold_m", "hue_bands", "min_saturation", "min_value", "min_fraction", "min_box_area"});
  traffic.number("proximity_threshold_m", c.proximity_threshold_m, 0.0, 1e6, true);
  const auto bands = traffic.section("hue_bands");
  bands.only({"red", "yellow", "green"});
  bands.band("red", c.light.red);
  bands.band("yellow", c.light.yellow);
  bands.band("green", c.light.green);
  traffic.number("min_saturation", c.light.min_saturation, 0.0, 1.0);
  traffic.number("min_value", c.light.min_value, 0.0, 1.0);
  traffic.number("min_fraction", c.light.min_fraction, 0.0, 1.0);
  traffic.number("min_box_area", c.light.min_box_area, 0.0, 1e9);

  const auto eval = root.section("eval");
  eval.only({"iou_threshold", "ra_threshold"});
  eval.number("iou_threshold", c.iou_threshold, 0.0, 1.0);
  eval.number("ra_threshold", c.ra_threshold, -1e9, 1.0);

  const auto runtime = root.section("runtime");
  runtime.only({"workers"});
  runtime.integer("workers", c.workers, 1, 256);

  for (const auto* name : {&c.road_class, &c.sidewalk_class})
    if (!c.registry.find(*name)) root.fail("class '" + *name + "' is not in the registry");
  for (const auto* list : {&c.refine_classes, &c.distance_classes})
    for (const auto& n : *list)
      if (!c.registry.find(n)) root.fail("class '" + n + "' is not in the registry");
  return c;
}

/// Every tunable with its value, in the same layout parse_config reads.
inline nlohmann::json config_to_json(const Config& c) {
  using nlohmann::json;
  json classes = json::object();
  for (const auto& e : c.registry.entries()) classes[e.name] = e.id;
  auto radius = [](const std::optional<int>& r) { return r ? json(*r) : json(nullptr); };
  auto band = [](const HueBand& b) { return json::array({b.lo, b.hi}); };
  return {
      {"classes", classes},
      {"roi", {{"se_radius", radius(c.roi_se_radius)}, {"keep_fraction", c.keep_fraction}, {"road_class", c.road_class}}},
      {"refine",
       {{"se_radius", radius(c.refine_se_radius)},
        {"min_area_frac", c.min_area_frac},
        {"classes", c.refine_classes},
        {"sidewalk_class", c.sidewalk_class}}},
      {"distance",
       {{"classes", c.distance_classes},
        {"min_pool_kernel", c.distance.min_pool_kernel},
        {"average_kernels", c.distance.average_kernels},
        {"sigma_multiplier", c.distance.sigma_multiplier},
        {"min_points", c.distance.min_points},
        {"depth_scale", c.distance.depth_scale}}},
      {"traffic",
       {{"proximity_threshold_m", c.proximity_threshold_m},
        {"hue_bands", {{"red", band(c.light.red)}, {"yellow", band(c.light.yellow)}, {"green", band(c.light.green)}}},
        {"min_saturation", c.light.min_saturation},
        {"min_value", c.light.min_value},
        {"min_fraction", c.light.min_fraction},
        {"min_box_area", c.light.min_box_area}}},
      {"eval", {{"iou_threshold", c.iou_threshold}, {"ra_threshold", c.ra_threshold}}},
      {"runtime", {{"workers", c.workers}}},
  };
}

/// The environment variable, when set and non-empty, replaces `cli_path`.
inline std::optional<std::filesystem::path> resolve_config_path(const std::optional<std::filesystem::path>& cli_path) {
  if (const char* env = std::getenv(kConfigEnv); env && *env) return std::filesystem::path(env);
  return cli_path;
}

inline Config load_config(const std::optional<std::filesystem::path>& cli_path) {
  const auto path = resolve_config_path(cli_path);
  if (!path) return Config{};
  std::ifstream in(*path, std::ios::binary);
  if (!in) throw ConfigError("config " + path->string() + ": cannot open");
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_config(text, path->string());
}

}  // namespace percept
