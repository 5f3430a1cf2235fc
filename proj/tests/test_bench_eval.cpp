#include <gtest/gtest.h>

#include "percept/bench.hpp"
#include "percept/eval.hpp"
#include "percept/synth_io.hpp"
#include "temp_dir.hpp"

using namespace percept;

TEST(Percentile, NearestRank) {
  EXPECT_EQ(percentile({}, 50), 0.0);
  EXPECT_EQ(percentile({7}, 95), 7.0);
  EXPECT_EQ(percentile({4, 1, 3, 2}, 50), 2.0);
  EXPECT_EQ(percentile({4, 1, 3, 2}, 95), 4.0);
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  EXPECT_EQ(percentile(v, 95), 95.0);
  EXPECT_EQ(percentile(v, 0), 1.0);
}

TEST(Benchmark, SampleCountsAndConsistency) {
  const auto b = synth::to_bundle(0, synth::render_scene(synth::random_scene(5)));
  const auto r = benchmark({b}, Config{}, 2);
  EXPECT_EQ(r.frames, 1u);
  ASSERT_EQ(r.stages.size(), std::size(kStages));
  for (const auto& s : r.stages) {
    EXPECT_EQ(s.samples_ms.size(), 2u) << s.name;
    EXPECT_LE(s.p50_ms, s.p95_ms);
  }
  ASSERT_EQ(r.end_to_end.samples_ms.size(), 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    double sum = 0;
    for (const auto& s : r.stages) sum += s.samples_ms[i];
    EXPECT_LE(sum, r.end_to_end.samples_ms[i]);
  }
  EXPECT_DOUBLE_EQ(r.fps, 1000.0 / r.end_to_end.mean_ms);
  const auto j = bench_to_json(r);
  EXPECT_TRUE(j.contains("fps"));
  EXPECT_THROW(benchmark({}, Config{}, 1), InputError);
  EXPECT_THROW(benchmark({b}, Config{}, 0), InputError);
}

TEST(Evaluate, SyntheticRunScoresPerfectDetections) {
  fixture::TempDir gt("eval_gt"), pred("eval_pred");
  synth::SceneOptions opt;
  opt.emit_light_state = true;
  synth::write_scenes(gt.path(), 4, 12, opt);
  const auto s = run_directory(gt.path(), pred.path(), Config{});
  ASSERT_EQ(s.failed, 0u);
  const auto rep = evaluate(pred.path(), gt.path(), Config{});
  EXPECT_EQ(rep.frames, 4u);
  EXPECT_TRUE(rep.failed_frames.empty());
  ASSERT_FALSE(rep.per_class.empty());
  for (const auto& [cls, c] : rep.per_class) {
    EXPECT_EQ(c.fp, 0u) << cls;
    EXPECT_EQ(c.fn, 0u) << cls;
  }
  const auto j = report_to_json(rep);
  EXPECT_TRUE(j["timing"].is_null());
  EXPECT_EQ(j["detection"]["all"]["precision"], 1.0);
  EXPECT_FALSE(rep.lanes.ious.empty());
  for (const auto& d : rep.distances) EXPECT_TRUE(d.predicted.has_value());
}

TEST(Evaluate, MissingOutputsCountAsFailedFrames) {
  fixture::TempDir gt("eval_gt_missing"), pred("eval_pred_missing");
  synth::write_scenes(gt.path(), 2, 3, {});
  const auto rep = evaluate(pred.path(), gt.path(), Config{});
  EXPECT_EQ(rep.failed_frames, (std::vector<int>{0, 1}));
  std::size_t fn = 0;
  for (const auto& [cls, c] : rep.per_class) {
    EXPECT_EQ(c.tp, 0u);
    fn += c.fn;
  }
  EXPECT_GT(fn, 0u);
}
