#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "coopfuse/cli.hpp"

using namespace coopfuse;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "coopfuse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string cfg(const std::string& name) { return std::string(COOPFUSE_CONFIG_DIR) + "/" + name + ".yaml"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("coopfuse_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub) const { return (dir_ / sub).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ValidateConfig) {
  EXPECT_EQ(cli({"validate-config", "--config", cfg("minimal")}).code, kExitOk);
  const CliRun missing = cli({"validate-config", "--config", "/nonexistent.yaml"});
  EXPECT_EQ(missing.code, kExitConfig);
  EXPECT_NE(missing.err.find("config error"), std::string::npos);

  fs::create_directories(dir_);
  std::ofstream(dir_ / "bad.yaml") << "tick: 0.5\nobjects: { cuont: 3 }\n";
  const CliRun bad = cli({"validate-config", "--config", (dir_ / "bad.yaml").string()});
  EXPECT_EQ(bad.code, kExitConfig);
  EXPECT_NE(bad.err.find("objects.cuont"), std::string::npos);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(cli({}).code, kExitConfig);
  EXPECT_EQ(cli({"run"}).code, kExitConfig);
  EXPECT_EQ(cli({"frobnicate", "--config", cfg("minimal")}).code, kExitConfig);
  EXPECT_EQ(cli({"--version"}).code, kExitOk);
  EXPECT_EQ(cli({"run", "--config", cfg("minimal"), "--r-int", "abc"}).code, kExitConfig);
  EXPECT_EQ(cli({"run", "--config", cfg("minimal"), "--jobs", "0"}).code, kExitConfig);
}

TEST_F(CliTest, RunWritesArtifactsDeterministically) {
  ASSERT_EQ(cli({"run", "--config", cfg("minimal"), "--out", out("a")}).code, kExitOk);
  ASSERT_EQ(cli({"run", "--config", cfg("minimal"), "--out", out("b")}).code, kExitOk);
  for (const char* f : {"metrics.csv", "events.log", "manifest.json"}) {
    ASSERT_TRUE(fs::exists(dir_ / "a" / f)) << f;
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const auto man = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(man["seed"], 3);
  EXPECT_EQ(man["seed_source"], "config");
  EXPECT_EQ(man["command"], "run");
  EXPECT_TRUE(man.contains("config_hash"));
  const std::string metrics = slurp(dir_ / "a" / "metrics.csv");
  EXPECT_EQ(metrics.rfind("ap,ap_0.5m,ap_1m,ap_2m,ap_4m,mota_like,amota_like", 0), 0u);
}

TEST_F(CliTest, SeedFlagOverrides) {
  ASSERT_EQ(cli({"run", "--config", cfg("minimal"), "--seed", "11", "--out", out("a")}).code, kExitOk);
  const auto man = nlohmann::json::parse(slurp(dir_ / "a" / "manifest.json"));
  EXPECT_EQ(man["seed"], 11);
  EXPECT_EQ(man["seed_source"], "flag");
}

TEST_F(CliTest, SweepRintSingleValue) {
  ASSERT_EQ(cli({"sweep-rint", "--config", cfg("minimal"), "--r-int", "30", "--out", out("s")}).code, kExitOk);
  const std::string csv = slurp(dir_ / "s" / "sweep_rint.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.rfind("r_int,ap,amota_like,duplicate_rate", 0), 0u);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "sweep_rint_timing.csv"));
}

TEST_F(CliTest, SweepLatencyRowsAndJobsInvariance) {
  ASSERT_EQ(cli({"sweep-latency", "--config", cfg("minimal"), "--out", out("one")}).code, kExitOk);
  ASSERT_EQ(cli({"sweep-latency", "--config", cfg("minimal"), "--jobs", "3", "--out", out("three")}).code, kExitOk);
  const std::string csv = slurp(dir_ / "one" / "sweep_latency.csv");
  EXPECT_EQ(csv, slurp(dir_ / "three" / "sweep_latency.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);  // header + 2 latencies x 2 modes
  ASSERT_EQ(cli({"sweep-latency", "--config", cfg("minimal"), "--no-compensation", "--out", out("off")}).code,
            kExitOk);
  const std::string off = slurp(dir_ / "off" / "sweep_latency.csv");
  EXPECT_EQ(std::count(off.begin(), off.end(), '\n'), 3);
  EXPECT_EQ(off.find(",on,"), std::string::npos);
}

TEST_F(CliTest, RobustnessAndBandwidth) {
  ASSERT_EQ(cli({"robustness", "--config", cfg("minimal"), "--alpha", "0,1", "--out", out("r")}).code, kExitOk);
  const std::string rob = slurp(dir_ / "r" / "robustness.csv");
  EXPECT_EQ(rob.rfind("alpha,accuracy,precision,recall,scenes\n0,", 0), 0u);

  ASSERT_EQ(cli({"bench-bandwidth", "--config", cfg("minimal"), "--out", out("b")}).code, kExitOk);
  const std::string bw = slurp(dir_ / "b" / "bandwidth.csv");
  EXPECT_NE(bw.find("sparse,15,16283,32566\n"), std::string::npos);
  EXPECT_NE(bw.find("bev,51.2,,33554432\n"), std::string::npos);
  const auto man = nlohmann::json::parse(slurp(dir_ / "b" / "manifest.json"));
  EXPECT_NEAR(man["sparse_fit"]["r_squared"].get<double>(), 1.0, 1e-12);
}
