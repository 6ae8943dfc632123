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

#ifndef RSBEAM_EXPERIMENTS_HPP_
#define RSBEAM_EXPERIMENTS_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsbeam/model.hpp"
#include "rsbeam/optimizer.hpp"

namespace rsbeam {

enum class ScenarioKind { kSpecific, kRandom };

std::string_view ToString(ScenarioKind kind);

// {0, 0.2, ..., 2.0} bits per channel use.
std::vector<double> DefaultThresholdGrid();

double DbToLinear(double db);

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::kSpecific;
  int n_tx = 2;
  int n_users = 2;
  // Specific channels only.
  std::vector<double> theta_list;
  double gamma = 1.0;
  // Random channels only. Channel c is drawn with seed + c.
  int n_channels = 100;
  std::uint64_t seed = 0;
  double power_budget_db = 20.0;
  double noise_var = 1.0;
  std::vector<double> threshold_grid = DefaultThresholdGrid();
  // Empty means 1/K for every user.
  Eigen::VectorXd weights;
  std::vector<Scheme> modes{Scheme::kRs, Scheme::kMulp};
  ScaOptions sca;
  // When both modes run, an RS cell whose cold start ends below the MULP
  // result of the same cell is solved again from the MULP precoder, and the
  // better of the two is kept.
  bool rs_from_mulp_fallback = true;

  void Validate() const;
  double power_budget() const { return DbToLinear(power_budget_db); }
  SystemConfig Config(double threshold) const;
};

struct SweepRecord {
  ScenarioKind kind = ScenarioKind::kSpecific;
  int n_tx = 0;
  // NaN for random channels.
  double theta = 0.0;
  double gamma = 0.0;
  // Index into the random channel set; 0 for specific channels.
  int channel = 0;
  Scheme mode = Scheme::kRs;
  double threshold = 0.0;
  ScaStatus status = ScaStatus::kInfeasible;
  bool warm_started = false;
  int iterations = 0;
  // The fields below are NaN / empty when no precoder was returned.
  double wsr = 0.0;
  Eigen::VectorXd power_ratios;  // [common, private_1, ..., private_K]
  Eigen::VectorXd secrecy;
  std::optional<Precoder> precoder;

  bool has_solution() const { return precoder.has_value(); }
};

// Mean WSR of the converged cells for one (mode, threshold).
struct AverageRow {
  Scheme mode = Scheme::kRs;
  double threshold = 0.0;
  double mean_wsr = 0.0;  // NaN when nothing converged
  int converged = 0;
  int total = 0;
};

struct RandomAverage {
  std::vector<SweepRecord> records;
  std::vector<AverageRow> summary;
};

// Records are ordered theta-major, then mode, then threshold. `workers`
// bounds the number of threads; results do not depend on it.
std::vector<SweepRecord> RunSpecificSweep(const ScenarioSpec& spec,
                                          int workers = 1);

// Records are ordered mode, threshold, then channel.
RandomAverage RunRandomAverage(const ScenarioSpec& spec, int workers = 1);

std::vector<AverageRow> Summarize(const std::vector<SweepRecord>& records);

// CSV columns, in order:
//   kind, n_tx, theta, gamma, channel, mode, threshold, status,
//   warm_started, iterations, wsr, power_common, power_private_1..K,
//   secrecy_1..K
// K is taken from the first record (2 when empty). Missing values are empty
// fields. Numbers use '.' and 17 significant digits.
void WriteCsv(const std::vector<SweepRecord>& records, std::ostream& out);
std::vector<SweepRecord> ReadCsv(std::istream& in);
// Writes to a temporary sibling and renames it over `path`.
void EmitCsv(const std::vector<SweepRecord>& records, const std::string& path);

// Columns: mode, threshold, mean_wsr, converged, total.
void WriteSummaryCsv(const std::vector<AverageRow>& rows, std::ostream& out);
void EmitSummaryCsv(const std::vector<AverageRow>& rows,
                    const std::string& path);

struct ChartSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN leaves a gap
};

struct ChartAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

// One series per (theta, mode), y = WSR, x = threshold.
std::vector<ChartSeries> WsrSeries(const std::vector<SweepRecord>& records);
// One series per (theta, mode, stream); MULP has no common-stream series.
std::vector<ChartSeries> PowerRatioSeries(
    const std::vector<SweepRecord>& records);
// One series per mode from an averaged summary.
std::vector<ChartSeries> AverageSeries(const std::vector<AverageRow>& rows);

// Standalone SVG line chart with a legend. Throws std::invalid_argument when
// a series has mismatched x/y lengths or the series lengths differ.
std::string RenderSvg(const std::vector<ChartSeries>& series,
                      const ChartAxes& axes);
void EmitChart(const std::vector<ChartSeries>& series, const std::string& path,
               const ChartAxes& axes);

// Canonical scenarios: fig2/fig3 (N_t = 2, gamma = 1), fig4/fig5 (N_t = 4,
// gamma = 0.3), fig6a/fig6b (100 random channels, N_t = 2 / 4). Throws
// std::invalid_argument for any other id.
ScenarioSpec FigureScenario(std::string_view figure);
const std::vector<std::string>& FigureIds();

struct Assertion {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Shape checks that the given figure is expected to show.
std::vector<Assertion> FigureAssertions(std::string_view figure,
                                        const std::vector<SweepRecord>& records,
                                        const std::vector<AverageRow>& summary);

}  // namespace rsbeam

#endif  // RSBEAM_EXPERIMENTS_HPP_
