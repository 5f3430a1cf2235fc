#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "percept/io.hpp"
#include "percept/pipeline.hpp"

namespace percept {

struct TimingStats {
  std::string name;
  std::vector<double> samples_ms;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
};

struct BenchReport {
  std::size_t frames = 0;
  int iterations = 0;
  std::vector<TimingStats> stages;
  TimingStats end_to_end{"end_to_end", {}, 0, 0, 0};
  double fps = 0.0;
};

/// Nearest-rank percentile, p in (0, 100].
inline double percentile(std::vector<double> v, double p) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

inline void summarize(TimingStats& s) {
  if (s.samples_ms.empty()) return;
  double sum = 0.0;
  for (double x : s.samples_ms) sum += x;
  s.mean_ms = sum / static_cast<double>(s.samples_ms.size());
  s.p50_ms = percentile(s.samples_ms, 50);
  s.p95_ms = percentile(s.samples_ms, 95);
}

/// Times process_frame over every bundle, `iterations` times. File reading
/// is excluded; each (iteration, frame) pair contributes one sample per stage.
inline BenchReport benchmark(const std::vector<FrameBundle>& bundles, const Config& cfg, int iterations) {
  if (bundles.empty()) throw InputError("benchmark needs at least one frame");
  if (iterations < 1) throw InputError("benchmark needs at least one iteration");
  BenchReport r;
  r.frames = bundles.size();
  r.iterations = iterations;
  for (const char* s : kStages) r.stages.push_back({s, {}, 0, 0, 0});
  for (int it = 0; it < iterations; ++it)
    for (const auto& b : bundles) {
      const auto t0 = std::chrono::steady_clock::now();
      const PerceptionFrameOutput out = process_frame(b, cfg);
      const double e2e = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      r.end_to_end.samples_ms.push_back(e2e);
      for (const auto& t : out.timings)
        for (auto& s : r.stages)
          if (s.name == t.stage) s.samples_ms.push_back(t.ms);
    }
  for (auto& s : r.stages) summarize(s);
  summarize(r.end_to_end);
  r.fps = r.end_to_end.mean_ms > 0 ? 1000.0 / r.end_to_end.mean_ms : 0.0;
  return r;
}

inline std::vector<FrameBundle> read_bundles(const std::filesystem::path& dir, const ClassRegistry& fallback) {
  const ClassRegistry registry = bundle_registry(dir, fallback);
  std::vector<FrameBundle> out;
  for (int i : io::list_frames(dir)) out.push_back(read_bundle(dir, i, registry));
  return out;
}

inline io::Json bench_to_json(const BenchReport& r) {
  auto stats = [](const TimingStats& s) {
    return io::Json{{"samples", s.samples_ms.size()},
                    {"mean_ms", io::canonical(s.mean_ms)},
                    {"p50_ms", io::canonical(s.p50_ms)},
                    {"p95_ms", io::canonical(s.p95_ms)}};
  };
  io::Json stages = io::Json::object();
  for (const auto& s : r.stages) stages[s.name] = stats(s);
  return {{"frames", r.frames},
          {"iterations", r.iterations},
          {"stages", std::move(stages)},
          {"end_to_end", stats(r.end_to_end)},
          {"fps", io::canonical(r.fps)}};
}

}  // namespace percept
