#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "percept/io.hpp"
#include "temp_dir.hpp"

namespace fs = std::filesystem;

namespace {

int cli(const std::string& args, const fs::path& err = "/dev/null", const fs::path& out = "/dev/null") {
  const std::string cmd = std::string(PERCEPT_CLI_PATH) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Cli, SynthRunEvalBench) {
  fixture::TempDir tmp("cli_flow");
  const auto in = tmp.path() / "in", out = tmp.path() / "out";
  ASSERT_EQ(cli("synth --scenes 2 --seed 9 --out " + in.string()), 0);
  ASSERT_EQ(cli("run --input " + in.string() + " --out " + out.string() + " --render"), 0);
  EXPECT_TRUE(fs::exists(out / "frame_000001.render.ppm"));
  ASSERT_EQ(cli("eval --pred " + out.string() + " --gt " + in.string() + " --report " + (tmp.path() / "r.json").string()), 0);
  EXPECT_TRUE(percept::io::parse_json_file(tmp.path() / "r.json").contains("detection"));
  const auto bench_out = tmp.path() / "bench.txt";
  ASSERT_EQ(cli("bench --input " + in.string() + " --iters 1", "/dev/null", bench_out), 0);
  const auto j = percept::io::Json::parse(percept::io::read_text(bench_out));
  EXPECT_TRUE(j.contains("fps"));
}

TEST(Cli, CorruptDepthExitsOneWithLocation) {
  fixture::TempDir tmp("cli_corrupt");
  const auto in = tmp.path() / "in";
  ASSERT_EQ(cli("synth --scenes 2 --seed 1 --out " + in.string()), 0);
  const auto depth = in / "frame_000000.depth";
  auto bytes = percept::io::read_file(depth);
  bytes.resize(20);
  percept::io::write_file(depth, bytes.data(), bytes.size());
  const auto err = tmp.path() / "err.txt";
  EXPECT_EQ(cli("run --input " + in.string() + " --out " + (tmp.path() / "out").string(), err), 1);
  const auto text = percept::io::read_text(err);
  EXPECT_NE(text.find("frame_000000.depth"), std::string::npos) << text;
  EXPECT_NE(text.find("offset"), std::string::npos) << text;
  EXPECT_EQ(percept::io::parse_json_file(tmp.path() / "out" / "frame_000001.out.json")["status"], "ok");
}

TEST(Cli, ConfigAndUsageErrorsExitTwo) {
  fixture::TempDir tmp("cli_config");
  const auto in = tmp.path() / "in";
  ASSERT_EQ(cli("synth --scenes 1 --seed 1 --out " + in.string()), 0);
  percept::io::write_text(tmp.path() / "bad.json", R"({"roi": {"keep_fraction": 3}})");
  EXPECT_EQ(cli("run --input " + in.string() + " --out " + (tmp.path() / "o").string() + " --config " +
                (tmp.path() / "bad.json").string()),
            2);
  EXPECT_EQ(cli("run --input " + in.string() + " --bogus"), 2);
  EXPECT_EQ(cli("synth --scenes 1 --seed 1 --out " + in.string() + " --noise 2,0"), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
}
