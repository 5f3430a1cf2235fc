#include <gtest/gtest.h>

#include <cstdlib>

#include "percept/config.hpp"
#include "percept/io.hpp"
#include "temp_dir.hpp"

using namespace percept;

namespace {

struct EnvGuard {
  EnvGuard() { unsetenv(kConfigEnv); }
  ~EnvGuard() { unsetenv(kConfigEnv); }
};

}  // namespace

TEST(Config, EmptyDocumentGivesDefaults) {
  const auto c = parse_config("{}");
  EXPECT_EQ(c.registry, ClassRegistry::defaults());
  EXPECT_EQ(c.keep_fraction, 0.5);
  EXPECT_EQ(c.min_area_frac, 0.002);
  EXPECT_EQ(c.distance.min_pool_kernel, 3);
  EXPECT_EQ(c.distance.average_kernels, (std::vector<int>{2, 3, 5}));
  EXPECT_EQ(c.distance.sigma_multiplier, 2.0);
  EXPECT_EQ(c.distance.min_points, 4u);
  EXPECT_EQ(c.distance.depth_scale, 1.0);
  EXPECT_EQ(c.proximity_threshold_m, 10.0);
  EXPECT_EQ(c.iou_threshold, 0.5);
  EXPECT_EQ(c.ra_threshold, 0.8);
  EXPECT_EQ(c.roi_radius_for(1280), 5);
  EXPECT_EQ(c.refine_radius_for(640), 3);
  EXPECT_EQ(c.refine_ids(), (std::vector<int>{2, 3, 4}));
}

TEST(Config, OverridesApply) {
  const auto c = parse_config(R"({
    "roi": {"se_radius": 2, "keep_fraction": 0.7},
    "distance": {"average_kernels": [2], "min_points": 6, "depth_scale": 0.5},
    "traffic": {"proximity_threshold_m": 12, "hue_bands": {"green": [90, 150]}},
    "runtime": {"workers": 4}
  })");
  EXPECT_EQ(c.roi_radius_for(1280), 2);
  EXPECT_EQ(c.keep_fraction, 0.7);
  EXPECT_EQ(c.distance.average_kernels, std::vector<int>{2});
  EXPECT_EQ(c.distance.min_points, 6u);
  EXPECT_EQ(c.distance.depth_scale, 0.5);
  EXPECT_EQ(c.proximity_threshold_m, 12.0);
  EXPECT_EQ(c.light.green.lo, 90.0);
  EXPECT_EQ(c.workers, 4);
}

TEST(Config, RoundTripsThroughJson) {
  const auto c = parse_config(R"({"refine": {"se_radius": 4}, "eval": {"iou_threshold": 0.6}})");
  const auto again = parse_config(config_to_json(c).dump());
  EXPECT_EQ(config_to_json(again), config_to_json(c));
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config(R"({"roi": {"radius": 3}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"extra": 1})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"roi": {"keep_fraction": 1.5}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"refine": {"min_area_frac": 0}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"distance": {"average_kernels": []}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"distance": {"classes": ["tram"]}})"), ConfigError);
  EXPECT_THROW(parse_config(R"({"classes": {"road": 0}})"), ConfigError);
  EXPECT_THROW(parse_config("{not json"), ConfigError);
}

TEST(Config, CustomRegistry) {
  const auto c = parse_config(R"({"classes": {"road": 1, "sidewalk": 2, "car": 3, "bus": 4, "van": 9},
                                  "distance": {"classes": ["car", "van"]}})");
  EXPECT_EQ(c.registry.id("van"), 9);
  EXPECT_EQ(c.registry.id("background"), 0);
}

TEST(Config, EnvironmentOverridesPath) {
  EnvGuard guard;
  fixture::TempDir tmp("config_env");
  io::write_text(tmp.path() / "a.json", R"({"runtime": {"workers": 3}})");
  io::write_text(tmp.path() / "b.json", R"({"runtime": {"workers": 7}})");
  EXPECT_EQ(load_config(tmp.path() / "a.json").workers, 3);
  EXPECT_EQ(load_config(std::nullopt).workers, 1);
  setenv(kConfigEnv, (tmp.path() / "b.json").c_str(), 1);
  EXPECT_EQ(load_config(tmp.path() / "a.json").workers, 7);
  EXPECT_EQ(load_config(std::nullopt).workers, 7);
  setenv(kConfigEnv, (tmp.path() / "missing.json").c_str(), 1);
  EXPECT_THROW(load_config(std::nullopt), ConfigError);
}
