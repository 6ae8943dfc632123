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

#include "rsbeam/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

namespace rsbeam {
namespace {

constexpr double kPi = std::numbers::pi;

ScenarioSpec SmallSpecific() {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kSpecific;
  spec.theta_list = {kPi / 9, 3 * kPi / 9};
  spec.threshold_grid = {0.0, 1.0};
  return spec;
}

ScenarioSpec SmallRandom(int channels) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kRandom;
  spec.n_channels = channels;
  spec.seed = 42;
  spec.threshold_grid = {0.0, 0.6};
  return spec;
}

std::string Csv(const std::vector<SweepRecord>& records) {
  std::ostringstream out;
  WriteCsv(records, out);
  return out.str();
}

// Minimal well-formedness check: every opened element is closed in order.
bool BalancedXml(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    const std::size_t end = text.find('>', pos);
    if (end == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, end - pos - 1);
    pos = end + 1;
    if (tag.empty() || tag[0] == '?' || tag[0] == '!') continue;
    if (tag.back() == '/') continue;
    if (tag[0] == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    stack.push_back(tag.substr(0, tag.find(' ')));
  }
  return stack.empty();
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("rsbeam_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(ScenarioSpecTest, DefaultsAndValidation) {
  const std::vector<double> grid = DefaultThresholdGrid();
  ASSERT_EQ(grid.size(), 11u);
  EXPECT_EQ(grid.front(), 0.0);
  EXPECT_EQ(grid.back(), 2.0);
  EXPECT_DOUBLE_EQ(DbToLinear(20.0), 100.0);

  ScenarioSpec spec = SmallSpecific();
  EXPECT_NO_THROW(spec.Validate());
  spec.threshold_grid = {};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  spec.threshold_grid = {1.0, 0.5};
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  spec = SmallSpecific();
  spec.n_users = 3;
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  spec = SmallRandom(0);
  EXPECT_THROW(spec.Validate(), std::invalid_argument);
  EXPECT_THROW(RunRandomAverage(SmallSpecific()), std::invalid_argument);
  EXPECT_THROW(RunSpecificSweep(SmallRandom(1)), std::invalid_argument);
}

TEST(FigureScenarioTest, CanonicalSettings) {
  const ScenarioSpec f2 = FigureScenario("fig2");
  EXPECT_EQ(f2.n_tx, 2);
  EXPECT_EQ(f2.gamma, 1.0);
  EXPECT_EQ(f2.theta_list.size(), 4u);
  EXPECT_DOUBLE_EQ(f2.power_budget(), 100.0);
  const ScenarioSpec f5 = FigureScenario("fig5");
  EXPECT_EQ(f5.n_tx, 4);
  EXPECT_EQ(f5.gamma, 0.3);
  const ScenarioSpec f6 = FigureScenario("fig6b");
  EXPECT_EQ(f6.kind, ScenarioKind::kRandom);
  EXPECT_EQ(f6.n_tx, 4);
  EXPECT_EQ(f6.n_channels, 100);
  EXPECT_THROW(FigureScenario("fig7"), std::invalid_argument);
  EXPECT_EQ(FigureIds().size(), 6u);
}

TEST(RunSpecificSweepTest, OrderingAndRecordIntegrity) {
  const ScenarioSpec spec = SmallSpecific();
  const auto records = RunSpecificSweep(spec);
  ASSERT_EQ(records.size(), 2u * 2u * 2u);
  // theta-major, then mode, then threshold.
  EXPECT_EQ(records[0].theta, spec.theta_list[0]);
  EXPECT_EQ(records[0].mode, Scheme::kRs);
  EXPECT_EQ(records[1].threshold, 1.0);
  EXPECT_EQ(records[2].mode, Scheme::kMulp);
  EXPECT_EQ(records[4].theta, spec.theta_list[1]);
  for (const auto& r : records) {
    ASSERT_TRUE(r.has_solution());
    const ChannelMatrix h = SpecificChannels(2, r.theta, r.gamma);
    EXPECT_NEAR(r.wsr, Evaluate(h, *r.precoder, spec.Config(r.threshold)).wsr,
                1e-9);
    EXPECT_NEAR(r.power_ratios.sum(), TransmitPower(*r.precoder) / 100.0, 1e-12);
  }
}

TEST(RunSpecificSweepTest, FigureTwoRowCount) {
  const auto records = RunSpecificSweep(FigureScenario("fig2"));
  EXPECT_EQ(records.size(), 4u * 2u * DefaultThresholdGrid().size());
  EXPECT_EQ(WsrSeries(records).size(), 8u);
  for (const auto& s : WsrSeries(records)) {
    EXPECT_EQ(s.x.size(), DefaultThresholdGrid().size());
  }
}

TEST(RunSpecificSweepProperty, DeterministicAndWorkerIndependent) {
  const ScenarioSpec spec = SmallSpecific();
  const std::string a = Csv(RunSpecificSweep(spec, 1));
  const std::string b = Csv(RunSpecificSweep(spec, 1));
  const std::string c = Csv(RunSpecificSweep(spec, 3));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

TEST(RunSpecificSweepProperty, PermutingCellsOnlyReordersRows) {
  ScenarioSpec spec = SmallSpecific();
  const auto forward = RunSpecificSweep(spec);
  std::reverse(spec.theta_list.begin(), spec.theta_list.end());
  const auto backward = RunSpecificSweep(spec);
  ASSERT_EQ(forward.size(), backward.size());
  for (const auto& r : forward) {
    auto it = std::find_if(backward.begin(), backward.end(), [&](const auto& o) {
      return o.theta == r.theta && o.mode == r.mode && o.threshold == r.threshold;
    });
    ASSERT_NE(it, backward.end());
    EXPECT_EQ(it->wsr, r.wsr);
    EXPECT_EQ(it->power_ratios, r.power_ratios);
  }
}

TEST(RunRandomAverageTest, SingleChannelSummaryEqualsRecord) {
  const RandomAverage avg = RunRandomAverage(SmallRandom(1));
  ASSERT_EQ(avg.records.size(), 4u);
  ASSERT_EQ(avg.summary.size(), 4u);
  for (const auto& row : avg.summary) {
    const auto it = std::find_if(
        avg.records.begin(), avg.records.end(), [&](const SweepRecord& r) {
          return r.mode == row.mode && r.threshold == row.threshold;
        });
    ASSERT_NE(it, avg.records.end());
    EXPECT_EQ(row.total, 1);
    if (it->status == ScaStatus::kConverged) {
      EXPECT_EQ(row.converged, 1);
      EXPECT_EQ(row.mean_wsr, it->wsr);
    }
  }
}

TEST(RunRandomAverageTest, OrderingAndChannelReuse) {
  const RandomAverage avg = RunRandomAverage(SmallRandom(3));
  ASSERT_EQ(avg.records.size(), 2u * 2u * 3u);
  // mode, threshold, then channel.
  EXPECT_EQ(avg.records[0].channel, 0);
  EXPECT_EQ(avg.records[2].channel, 2);
  EXPECT_EQ(avg.records[3].threshold, 0.6);
  EXPECT_EQ(avg.records[6].mode, Scheme::kMulp);
  for (const auto& r : avg.records) {
    EXPECT_TRUE(std::isnan(r.theta));
    if (!r.has_solution()) continue;
    const ChannelMatrix h = RandomChannels(2, 2, 42 + r.channel);
    EXPECT_NEAR(r.wsr,
                Evaluate(h, *r.precoder, SmallRandom(3).Config(r.threshold)).wsr,
                1e-9);
  }
}

TEST(SummarizeTest, ExcludesUnconvergedButCountsThem) {
  std::vector<SweepRecord> records(3);
  for (auto& r : records) {
    r.mode = Scheme::kRs;
    r.threshold = 0.5;
    r.status = ScaStatus::kConverged;
    r.precoder = Precoder::Zero(2, 2);
  }
  records[0].wsr = 2.0;
  records[1].wsr = 4.0;
  records[2].status = ScaStatus::kInfeasible;
  records[2].precoder.reset();
  const auto rows = Summarize(records);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].mean_wsr, 3.0);
  EXPECT_EQ(rows[0].converged, 2);
  EXPECT_EQ(rows[0].total, 3);
}

TEST(CsvTest, EmptyIsHeaderOnly) {
  const std::string text = Csv({});
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1);
  EXPECT_EQ(text.rfind("kind,n_tx,theta,gamma,channel,mode,threshold,status,", 0),
            0u);
  std::istringstream in(text);
  EXPECT_TRUE(ReadCsv(in).empty());
}

TEST(CsvProperty, RoundTripsNumericFields) {
  const auto records = RunSpecificSweep(SmallSpecific());
  auto with_failure = records;
  SweepRecord failed;
  failed.kind = ScenarioKind::kRandom;
  failed.n_tx = 2;
  failed.theta = std::nan("");
  failed.gamma = std::nan("");
  failed.channel = 7;
  failed.threshold = 2.0;
  failed.status = ScaStatus::kInfeasible;
  failed.wsr = std::nan("");
  with_failure.push_back(failed);

  std::istringstream in(Csv(with_failure));
  const auto back = ReadCsv(in);
  ASSERT_EQ(back.size(), with_failure.size());
  auto same = [](double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a));
  };
  for (std::size_t i = 0; i < back.size(); ++i) {
    const auto& a = with_failure[i];
    const auto& b = back[i];
    EXPECT_EQ(a.kind, b.kind);
    EXPECT_EQ(a.mode, b.mode);
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.channel, b.channel);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_TRUE(same(a.theta, b.theta));
    EXPECT_TRUE(same(a.gamma, b.gamma));
    EXPECT_TRUE(same(a.threshold, b.threshold));
    EXPECT_TRUE(same(a.has_solution() ? a.wsr : std::nan(""), b.wsr));
    ASSERT_EQ(a.power_ratios.size(), b.power_ratios.size());
    for (Eigen::Index k = 0; k < a.power_ratios.size(); ++k) {
      EXPECT_TRUE(same(a.power_ratios[k], b.power_ratios[k]));
    }
    for (Eigen::Index k = 0; k < a.secrecy.size(); ++k) {
      EXPECT_TRUE(same(a.secrecy[k], b.secrecy[k]));
    }
  }
  // Failed cells keep empty numeric fields.
  const std::string text = Csv({failed});
  EXPECT_NE(text.find("random,2,,,7,rs,2,infeasible,0,0,,"), std::string::npos);
}

TEST(CsvTest, EmitWritesAtomicallyAndReportsPath) {
  const auto dir = TempDir("csv");
  const std::string path = (dir / "out.csv").string();
  EmitCsv({}, path);
  EXPECT_TRUE(std::filesystem::exists(path));
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  try {
    EmitCsv({}, (dir / "missing" / "out.csv").string());
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
}

TEST(CsvTest, ReadRejectsMalformedRows) {
  std::istringstream bad_header("a,b\n");
  EXPECT_THROW(ReadCsv(bad_header), std::invalid_argument);
  std::istringstream short_row(Csv({}) + "specific,2\n");
  EXPECT_THROW(ReadCsv(short_row), std::invalid_argument);
}

TEST(ChartTest, SinglePointRendersWellFormed) {
  const std::string svg = RenderSvg({{"only", {0.5}, {3.0}}}, {"t", "x", "y"});
  EXPECT_TRUE(BalancedXml(svg));
  EXPECT_NE(svg.find("<circle"), std::string::npos);
  EXPECT_NE(svg.find(">only<"), std::string::npos);
}

TEST(ChartTest, InconsistentSeriesThrow) {
  EXPECT_THROW(RenderSvg({{"a", {0.0, 1.0}, {1.0}}}, {}), std::invalid_argument);
  EXPECT_THROW(
      RenderSvg({{"a", {0.0, 1.0}, {1.0, 2.0}}, {"b", {0.0}, {1.0}}}, {}),
      std::invalid_argument);
}

TEST(ChartTest, EscapesLabelsAndSkipsGaps) {
  const double nan = std::nan("");
  const std::string svg =
      RenderSvg({{"a<b & c", {0.0, 1.0, 2.0}, {1.0, nan, 2.0}}}, {"<t>", "", ""});
  EXPECT_TRUE(BalancedXml(svg));
  EXPECT_NE(svg.find("a&lt;b &amp; c"), std::string::npos);
  // The gap leaves two isolated points and no connecting segment.
  std::size_t circles = 0;
  for (std::size_t p = svg.find("<circle"); p != std::string::npos;
       p = svg.find("<circle", p + 1)) {
    ++circles;
  }
  EXPECT_EQ(circles, 2u);
}

TEST(ChartTest, EmitChartWritesFile) {
  const auto dir = TempDir("svg");
  const auto records = RunSpecificSweep(SmallSpecific());
  const std::string path = (dir / "wsr.svg").string();
  EmitChart(WsrSeries(records), path, {"wsr", "threshold", "wsr"});
  std::ifstream in(path);
  std::stringstream content;
  content << in.rdbuf();
  EXPECT_TRUE(BalancedXml(content.str()));
  EXPECT_EQ(PowerRatioSeries(records).size(), 2u * (3u + 2u));
}

TEST(FigureAssertionsTest, SmallSweepPassesShapeChecks) {
  const auto records = RunSpecificSweep(SmallSpecific());
  for (const auto& a : FigureAssertions("fig2", records, {})) {
    EXPECT_TRUE(a.pass) << a.name << ": " << a.detail;
  }
  for (const auto& a : FigureAssertions("fig3", records, {})) {
    EXPECT_TRUE(a.pass) << a.name << ": " << a.detail;
  }
  EXPECT_THROW(FigureAssertions("fig1", records, {}), std::invalid_argument);
}

TEST(FigureAssertionsTest, DetectsViolations) {
  std::vector<SweepRecord> records(2);
  for (auto& r : records) {
    r.theta = kPi / 9;
    r.threshold = 0.0;
    r.status = ScaStatus::kConverged;
    r.precoder = Precoder::Zero(2, 2);
    r.power_ratios = Eigen::Vector3d(0.0, 0.3, 0.7);
  }
  records[0].mode = Scheme::kRs;
  records[0].wsr = 1.0;
  records[1].mode = Scheme::kMulp;
  records[1].wsr = 2.0;
  const auto checks = FigureAssertions("fig2", records, {});
  EXPECT_FALSE(checks[0].pass);
  const auto split = FigureAssertions("fig3", records, {});
  EXPECT_FALSE(split[0].pass);
  EXPECT_FALSE(split[1].pass);
}

}  // namespace
}  // namespace rsbeam
