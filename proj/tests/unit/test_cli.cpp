#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
  const std::string cmd = std::string(FEDSEL_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("fedsel_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kSmall = R"({
  "model": {"p": 24, "s0": 2, "beta": 0.3, "sigma": 0.05},
  "network": {"clients": 3, "n_local": 20},
  "selection": {"k": 5},
  "lambda": {"grid_size": 8},
  "fedavg": {"enabled": true, "max_rounds": 2000},
  "bounds": {"points": 7},
  "sweep": {"axis": "N", "grid": [2, 3]},
  "seed": 7, "replicates": 2
})";

}  // namespace

TEST(Cli, RunIsReproducible) {
  const auto dir = scratch("run");
  std::ofstream(dir / "c.json") << kSmall;
  const std::string cfg = "--config " + (dir / "c.json").string();
  ASSERT_EQ(run_cli("run " + cfg + " --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("run " + cfg + " --out " + (dir / "b").string() + " --jobs 2"), 0);
  for (const auto& e : fs::directory_iterator(dir / "a"))
    EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename())) << e.path();
  ASSERT_EQ(run_cli("run " + cfg + " --out " + (dir / "c").string() + " --seed 8"), 0);
  EXPECT_NE(slurp(dir / "a" / "metrics.csv"), slurp(dir / "c" / "metrics.csv"));
}

TEST(Cli, ConfigErrorsExitTwoAndWriteNothing) {
  const auto dir = scratch("bad");
  std::ofstream(dir / "c.json") << R"({"network": {"clients": 0}})";
  EXPECT_EQ(run_cli("run --config " + (dir / "c.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_FALSE(fs::exists(dir / "o"));
  std::ofstream(dir / "d.json") << "{ not json";
  EXPECT_EQ(run_cli("bounds --config " + (dir / "d.json").string() + " --out " + (dir / "o").string()), 2);
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.json").string()), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_FALSE(fs::exists(dir / "o"));
}

TEST(Cli, RuntimeErrorsExitThree) {
  const auto dir = scratch("runtime");
  std::ofstream(dir / "c.json") << R"({"model": {"p": 24, "s0": 2, "sigma": 0},
                                       "network": {"clients": 2, "n_local": 20}, "replicates": 1})";
  EXPECT_EQ(run_cli("run --config " + (dir / "c.json").string() + " --out " + (dir / "o").string()), 3);
  std::ofstream(dir / "d.json") << kSmall;
  EXPECT_EQ(run_cli("real --config " + (dir / "d.json").string() + " --dataset " +
                    (dir / "nope.csv").string() + " --out " + (dir / "o").string()),
            3);
}

TEST(Cli, BoundsSweepAndOverrides) {
  const auto dir = scratch("other");
  std::ofstream(dir / "c.json") << kSmall;
  const std::string cfg = "--config " + (dir / "c.json").string();
  ASSERT_EQ(run_cli("bounds " + cfg + " --out " + (dir / "b").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "b" / "bounds.csv"));
  ASSERT_EQ(run_cli("sweep " + cfg + " --out " + (dir / "s").string() + " --axis tau --grid 0.05,0.1"), 0);
  EXPECT_NE(slurp(dir / "s" / "sweep.csv").find("\n0.050000000000000003,0,"), std::string::npos);
  EXPECT_EQ(run_cli("sweep " + cfg + " --out " + (dir / "t").string() + " --axis N --grid 0"), 2);
}
