// Copyright 2026 The rsbeam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace rsbeam::cli {
namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome RunCli(std::vector<std::string> args) {
  args.insert(args.begin(), "rsbeam");
  std::ostringstream out;
  std::ostringstream err;
  Outcome o;
  o.code = Run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

double Field(const std::string& text, const std::string& key) {
  const std::string needle = key + ": ";
  const auto pos = text.find(needle);
  if (pos == std::string::npos) throw std::runtime_error("no field " + key);
  return std::stod(text.substr(pos + needle.size()));
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rsbeam_cli_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(ParseAngleTest, Forms) {
  EXPECT_DOUBLE_EQ(ParseAngle("2pi/9"), 2 * kPi / 9);
  EXPECT_DOUBLE_EQ(ParseAngle("3*pi/9"), kPi / 3);
  EXPECT_DOUBLE_EQ(ParseAngle("pi"), kPi);
  EXPECT_DOUBLE_EQ(ParseAngle("-pi/4"), -kPi / 4);
  EXPECT_DOUBLE_EQ(ParseAngle("0.5"), 0.5);
  EXPECT_THROW(ParseAngle(""), std::invalid_argument);
  EXPECT_THROW(ParseAngle("tau"), std::invalid_argument);
  EXPECT_THROW(ParseAngle("pi/0"), std::invalid_argument);
  EXPECT_THROW(ParseAngle("2pi/9x"), std::invalid_argument);
}

TEST(CliTest, ChannelPrintsBothUsers) {
  const Outcome o = RunCli({"channel", "--specific", "--nt", "2", "--theta",
                            "2pi/9", "--gamma", "1"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("h1:"), std::string::npos);
  EXPECT_NE(o.out.find("h2:"), std::string::npos);
  EXPECT_NEAR(Field(o.out, "norm1"), std::sqrt(2.0), 1e-9);
}

TEST(CliTest, SolveSpecificConverges) {
  const Outcome o =
      RunCli({"solve", "--specific", "--nt", "2", "--theta", "2pi/9", "--gamma",
              "1", "--pt-db", "20", "--rth", "0.5", "--mode", "rs"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_NE(o.out.find("status: converged"), std::string::npos);
  EXPECT_NE(o.out.find("feasible: yes"), std::string::npos);
  EXPECT_GT(Field(o.out, "wsr"), 0.0);
}

TEST(CliTest, MissingRequiredFlagIsUsageError) {
  const Outcome o = RunCli({"solve", "--specific", "--nt", "2", "--theta",
                            "2pi/9", "--mode", "rs"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_TRUE(o.out.empty());
  EXPECT_FALSE(o.err.empty());
}

TEST(CliTest, ConflictingOrBadArgumentsAreUsageErrors) {
  EXPECT_EQ(RunCli({"channel", "--specific", "--random"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"channel", "--specific", "--nt", "2"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"channel", "--random", "--theta", "pi"}).code, kExitUsage);
  EXPECT_EQ(RunCli({"solve", "--random", "--rth", "-1", "--mode", "rs"}).code,
            kExitUsage);
  EXPECT_EQ(RunCli({"solve", "--random", "--rth", "0", "--mode", "noma"}).code,
            kExitUsage);
  const Outcome o = RunCli({"reproduce", "fig9"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliTest, MulpRateShrinksWithThreshold) {
  const std::vector<std::string> base{"solve", "--random", "--nt", "4",
                                      "--seed", "7", "--mode", "mulp"};
  auto low = base;
  low.insert(low.end(), {"--rth", "0"});
  auto high = base;
  high.insert(high.end(), {"--rth", "1.0"});
  const Outcome a = RunCli(low);
  const Outcome b = RunCli(high);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  ASSERT_EQ(b.code, kExitOk) << b.err;
  // Local optima allow a small inversion.
  EXPECT_GE(Field(a.out, "wsr"), 0.98 * Field(b.out, "wsr"));
}

TEST(CliTest, ImpossibleThresholdExitsWithFailure) {
  const Outcome o = RunCli({"solve", "--specific", "--nt", "2", "--theta", "0",
                            "--rth", "0.5", "--mode", "rs", "--restarts", "1"});
  EXPECT_EQ(o.code, kExitFailure);
  EXPECT_NE(o.out.find("status: infeasible"), std::string::npos);
}

TEST(CliTest, ConfigFileSuppliesFlags) {
  const auto dir = TempDir("config");
  const std::string path = (dir / "run.ini").string();
  {
    std::ofstream ini(path);
    ini << "[solve]\nspecific=true\nnt=2\ntheta=2pi/9\nrth=0.2\nmode=mulp\n";
  }
  const Outcome from_file = RunCli({"--config", path, "solve"});
  const Outcome from_flags =
      RunCli({"solve", "--specific", "--nt", "2", "--theta", "2pi/9", "--rth",
              "0.2", "--mode", "mulp"});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  EXPECT_EQ(from_file.out, from_flags.out);
}

TEST(CliTest, SameFlagsSameOutput) {
  const std::vector<std::string> args{"solve", "--random", "--seed", "3",
                                      "--rth", "0.4", "--mode", "rs"};
  EXPECT_EQ(RunCli(args).out, RunCli(args).out);
}

TEST(CliTest, ReproduceWritesArtifacts) {
  const auto dir = TempDir("repro");
  const Outcome o = RunCli({"reproduce", "fig2", "--outdir", dir.string(),
                            "--thresholds", "0,1"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "fig2.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "fig2.svg"));
  EXPECT_NE(o.out.find("PASS "), std::string::npos);
}

TEST(CliTest, ReproduceRandomWritesSummary) {
  const auto dir = TempDir("repro6");
  const Outcome o = RunCli({"reproduce", "fig6a", "--outdir", dir.string(),
                            "--channels", "2", "--thresholds", "0.2"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "fig6a_summary.csv"));
}

TEST(CliTest, ReproduceHonorsOutdirEnvironment) {
  const auto dir = TempDir("env");
  ::setenv("RSBEAM_OUTDIR", dir.string().c_str(), 1);
  const Outcome o = RunCli({"reproduce", "fig3", "--thresholds", "0"});
  ::unsetenv("RSBEAM_OUTDIR");
  ASSERT_EQ(o.code, kExitOk) << o.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "fig3.csv"));
}

}  // namespace
}  // namespace rsbeam::cli
