#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "percept/bench.hpp"
#include "percept/config.hpp"
#include "percept/eval.hpp"
#include "percept/pipeline.hpp"
#include "percept/render.hpp"
#include "percept/synth_io.hpp"

namespace percept::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kFormatError = 1, kConfigError = 2 };

struct RunArgs {
  fs::path input;
  fs::path out;
  std::optional<fs::path> config;
  bool render = false;
};

struct EvalArgs {
  fs::path pred;
  fs::path gt;
  fs::path report;
  std::optional<fs::path> config;
};

struct SynthArgs {
  int scenes = 1;
  std::uint64_t seed = 0;
  fs::path out;
  std::optional<std::string> noise;  // "sigma,outlierFrac"
  bool light_states = false;
};

struct BenchArgs {
  fs::path input;
  int iters = 1;
  std::optional<fs::path> config;
  std::optional<fs::path> report;
};

/// "sigma,outlierFrac" with both values in [0, 1).
inline synth::Noise parse_noise(const std::string& text) {
  std::istringstream in(text);
  double sigma = -1, outliers = -1;
  char comma = 0;
  if (!(in >> sigma >> comma >> outliers) || comma != ',' || !(in >> std::ws).eof())
    throw ConfigError("--noise expects sigma,outlierFrac");
  if (sigma < 0 || sigma >= 1 || outliers < 0 || outliers >= 1)
    throw ConfigError("--noise fractions must lie in [0, 1)");
  return {sigma, outliers};
}

/// Maps library errors onto exit codes, reporting to `err`.
template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kFormatError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFormatError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kFormatError;
  }
}

inline int run(const RunArgs& a, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const Config cfg = load_config(a.config);
    if (!fs::is_directory(a.input)) throw FormatError(a.input.string(), 0, "input directory not found");
    FrameHook hook;
    if (a.render)
      hook = [&cfg](const FrameBundle& b, PerceptionFrameOutput& out) {
        Config frame_cfg = cfg;
        out.rendered = render_frame(b, out, frame_cfg);
        out.render_skipped = !out.rendered;
      };
    const RunSummary s = run_directory(a.input, a.out, cfg, hook);
    for (const auto& e : s.errors) err << "frame failed: " << e << "\n";
    log << "processed " << s.frames << " frames, " << s.failed << " failed\n";
    return s.failed > 0 ? kFormatError : kOk;
  });
}

inline int eval(const EvalArgs& a, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const Config cfg = load_config(a.config);
    const MetricsReport rep = evaluate(a.pred, a.gt, cfg);
    if (a.report.has_parent_path()) fs::create_directories(a.report.parent_path());
    io::write_text(a.report, report_to_json(rep).dump(1) + "\n");
    log << "evaluated " << rep.frames << " frames\n";
    return kOk;
  });
}

inline int synth(const SynthArgs& a, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    if (a.scenes < 1) throw ConfigError("--scenes must be at least 1");
    synth::SceneOptions opt;
    if (a.noise) opt.noise = parse_noise(*a.noise);
    opt.emit_light_state = a.light_states;
    synth::write_scenes(a.out, a.scenes, a.seed, opt);
    log << "wrote " << a.scenes << " scenes to " << a.out.string() << "\n";
    return kOk;
  });
}

inline int bench(const BenchArgs& a, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  return guarded(err, [&] {
    const Config cfg = load_config(a.config);
    if (a.iters < 1) throw ConfigError("--iters must be at least 1");
    const auto bundles = read_bundles(a.input, cfg.registry);
    if (bundles.empty()) throw FormatError(a.input.string(), 0, "no frames found");
    Config bench_cfg = cfg;
    bench_cfg.registry = bundle_registry(a.input, cfg.registry);
    const BenchReport r = benchmark(bundles, bench_cfg, a.iters);
    const std::string text = bench_to_json(r).dump(1) + "\n";
    if (a.report) io::write_text(*a.report, text);
    log << text;
    return kOk;
  });
}

}  // namespace percept::cli
