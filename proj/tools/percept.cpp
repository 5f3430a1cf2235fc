#include <CLI11.hpp>

#include "percept/cli.hpp"

int main(int argc, char** argv) {
  using namespace percept::cli;
  CLI::App app{"Perception post-processing pipeline"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "Process every frame bundle in a directory");
  run_cmd->add_option("--input", run_args.input, "Bundle directory")->required();
  run_cmd->add_option("--out", run_args.out, "Output directory")->required();
  run_cmd->add_option("--config", run_config, "JSON config (overridden by PERCEPT_CONFIG)");
  run_cmd->add_flag("--render", run_args.render, "Write annotated frames");

  EvalArgs eval_args;
  std::string eval_config;
  auto* eval_cmd = app.add_subcommand("eval", "Score a run against synthetic ground truth");
  eval_cmd->add_option("--pred", eval_args.pred, "Run output directory")->required();
  eval_cmd->add_option("--gt", eval_args.gt, "Ground-truth directory")->required();
  eval_cmd->add_option("--report", eval_args.report, "Report path")->required();
  eval_cmd->add_option("--config", eval_config, "JSON config");

  SynthArgs synth_args;
  std::string noise;
  auto* synth_cmd = app.add_subcommand("synth", "Render seeded synthetic scenes");
  synth_cmd->add_option("--scenes", synth_args.scenes, "Number of scenes")->required();
  synth_cmd->add_option("--seed", synth_args.seed, "Base seed")->required();
  synth_cmd->add_option("--out", synth_args.out, "Output directory")->required();
  synth_cmd->add_option("--noise", noise, "sigma,outlierFrac");
  synth_cmd->add_flag("--light-states", synth_args.light_states, "Write light states into detections");

  BenchArgs bench_args;
  std::string bench_config, bench_report;
  auto* bench_cmd = app.add_subcommand("bench", "Time the per-frame stages");
  bench_cmd->add_option("--input", bench_args.input, "Bundle directory")->required();
  bench_cmd->add_option("--iters", bench_args.iters, "Iterations over all frames")->required();
  bench_cmd->add_option("--config", bench_config, "JSON config");
  bench_cmd->add_option("--report", bench_report, "Also write the report here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  auto opt_path = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s); };
  if (*run_cmd) {
    run_args.config = opt_path(run_config);
    return run(run_args);
  }
  if (*eval_cmd) {
    eval_args.config = opt_path(eval_config);
    return eval(eval_args);
  }
  if (*synth_cmd) {
    if (!noise.empty()) synth_args.noise = noise;
    return synth(synth_args);
  }
  bench_args.config = opt_path(bench_config);
  if (!bench_report.empty()) bench_args.report = bench_report;
  return bench(bench_args);
}
