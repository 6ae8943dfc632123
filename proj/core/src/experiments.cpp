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
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace rsbeam {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SweepRecord MakeRecord(const ScenarioSpec& spec, double theta, double gamma,
                       int channel, Scheme mode, double threshold,
                       const ScaResult& result, bool warm_started) {
  SweepRecord rec;
  rec.kind = spec.kind;
  rec.n_tx = spec.n_tx;
  rec.theta = theta;
  rec.gamma = gamma;
  rec.channel = channel;
  rec.mode = mode;
  rec.threshold = threshold;
  rec.status = result.status;
  rec.warm_started = warm_started;
  rec.iterations = result.iterations;
  if (result.has_solution()) {
    rec.precoder = result.precoder;
    rec.wsr = result.report.wsr;
    rec.power_ratios = PowerRatios(*result.precoder, spec.power_budget());
    rec.secrecy = result.report.secrecy;
  } else {
    rec.wsr = kNaN;
  }
  return rec;
}

bool Better(const ScaResult& a, const ScaResult& b) {
  if (!a.has_solution()) return false;
  if (!b.has_solution()) return true;
  return a.wsr() > b.wsr();
}

// All modes of one (channel, threshold) cell, in spec.modes order.
std::vector<SweepRecord> SolveCell(const ScenarioSpec& spec,
                                   const ChannelMatrix& channel, double theta,
                                   double gamma, int index, double threshold) {
  const SystemConfig config = spec.Config(threshold);
  const bool both =
      std::find(spec.modes.begin(), spec.modes.end(), Scheme::kRs) !=
          spec.modes.end() &&
      std::find(spec.modes.begin(), spec.modes.end(), Scheme::kMulp) !=
          spec.modes.end();
  std::optional<ScaResult> mulp;
  if (both) mulp = ScaSolve(config, channel, spec.sca, Scheme::kMulp);

  std::vector<SweepRecord> out;
  for (Scheme mode : spec.modes) {
    if (mode == Scheme::kMulp) {
      const ScaResult r =
          mulp ? *mulp : ScaSolve(config, channel, spec.sca, Scheme::kMulp);
      out.push_back(MakeRecord(spec, theta, gamma, index, mode, threshold, r,
                               false));
      continue;
    }
    ScaResult r = ScaSolve(config, channel, spec.sca, Scheme::kRs);
    bool warm = false;
    if (both && spec.rs_from_mulp_fallback && mulp->has_solution() &&
        (!r.has_solution() || r.wsr() < mulp->wsr())) {
      ScaResult again =
          ScaSolve(config, channel, spec.sca, Scheme::kRs, &*mulp->precoder);
      if (Better(again, r)) {
        r = std::move(again);
        warm = true;
      }
    }
    out.push_back(
        MakeRecord(spec, theta, gamma, index, mode, threshold, r, warm));
  }
  return out;
}

// Runs body(0..count-1) on up to `workers` threads.
template <typename Body>
void ParallelFor(int count, int workers, const Body& body) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string Fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// "2pi/9" style label when theta is a small fraction of pi.
std::string AngleLabel(double theta) {
  for (int den = 1; den <= 12; ++den) {
    const double num = theta / std::numbers::pi * den;
    const double r = std::round(num);
    if (std::abs(num - r) < 1e-9) {
      std::string s = r == 0.0 ? "0" : (r == 1.0 ? "" : Fixed(r, 0)) + "pi";
      if (r != 0.0 && den != 1) s += "/" + std::to_string(den);
      return s;
    }
  }
  return Fixed(theta, 6);
}

const SweepRecord* Find(const std::vector<SweepRecord>& records, double theta,
                        Scheme mode, double threshold, int channel = 0) {
  for (const auto& r : records) {
    if (r.mode == mode && r.threshold == threshold && r.channel == channel &&
        (std::isnan(theta) ? std::isnan(r.theta) : r.theta == theta)) {
      return &r;
    }
  }
  return nullptr;
}

std::vector<double> Thetas(const std::vector<SweepRecord>& records) {
  std::vector<double> out;
  for (const auto& r : records) {
    if (std::find(out.begin(), out.end(), r.theta) == out.end()) {
      out.push_back(r.theta);
    }
  }
  return out;
}

std::vector<double> Thresholds(const std::vector<SweepRecord>& records) {
  std::vector<double> out;
  for (const auto& r : records) out.push_back(r.threshold);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string Cell(double theta, double threshold) {
  return "theta=" + AngleLabel(theta) + " rth=" + Fixed(threshold, 2);
}

// RS >= MULP - tol in every specific cell where MULP returned a precoder.
Assertion RsDominates(const std::vector<SweepRecord>& records, double tol) {
  Assertion a{"RS WSR >= MULP WSR - " + Fixed(tol, 4) + " in every cell", true,
              ""};
  double worst = std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& m : records) {
    if (m.mode != Scheme::kMulp || !m.has_solution()) continue;
    const SweepRecord* r = Find(records, m.theta, Scheme::kRs, m.threshold);
    const double margin =
        r && r->has_solution() ? r->wsr - m.wsr
                               : -std::numeric_limits<double>::infinity();
    if (margin < worst) {
      worst = margin;
      where = Cell(m.theta, m.threshold);
    }
  }
  a.pass = worst >= -tol;
  a.detail = std::isinf(worst) && worst > 0
                 ? "no comparable cells"
                 : "worst margin " + Fixed(worst, 6) + " at " + where;
  return a;
}

// WSR never grows by more than `rel` from a lower threshold to a higher one.
Assertion ThresholdMonotone(const std::vector<SweepRecord>& records,
                            double rel) {
  Assertion a{"WSR nonincreasing in threshold within " + Fixed(100 * rel, 0) +
                  "%",
              true, ""};
  double worst = 0.0;
  std::string where = "-";
  const auto grid = Thresholds(records);
  for (double theta : Thetas(records)) {
    for (Scheme mode : {Scheme::kRs, Scheme::kMulp}) {
      double best_lower = -std::numeric_limits<double>::infinity();
      for (double thr : grid) {
        const SweepRecord* r = Find(records, theta, mode, thr);
        if (!r || !r->has_solution()) continue;
        if (std::isfinite(best_lower)) {
          const double excess = (r->wsr - best_lower) / best_lower;
          if (excess > worst) {
            worst = excess;
            where = std::string(ToString(mode)) + " " + Cell(theta, thr);
          }
        }
        best_lower = std::max(best_lower, r->wsr);
      }
    }
  }
  a.pass = worst <= rel;
  a.detail = "largest relative increase " + Fixed(worst, 6) + " at " + where;
  return a;
}

Assertion FlatStart(const std::vector<SweepRecord>& records, double rel) {
  Assertion a{"RS WSR at threshold 0 matches the first positive threshold "
              "within " +
                  Fixed(100 * rel, 0) + "%",
              true, ""};
  const auto grid = Thresholds(records);
  auto first_positive =
      std::find_if(grid.begin(), grid.end(), [](double t) { return t > 0.0; });
  if (grid.empty() || grid.front() != 0.0 || first_positive == grid.end()) {
    a.pass = false;
    a.detail = "grid lacks 0 or a positive threshold";
    return a;
  }
  double worst = 0.0;
  std::string where = "-";
  for (double theta : Thetas(records)) {
    const SweepRecord* r0 = Find(records, theta, Scheme::kRs, 0.0);
    const SweepRecord* r1 = Find(records, theta, Scheme::kRs, *first_positive);
    double gap = std::numeric_limits<double>::infinity();
    if (r0 && r1 && r0->has_solution() && r1->has_solution()) {
      gap = std::abs(r0->wsr - r1->wsr) / r0->wsr;
    }
    if (gap > worst || std::isinf(gap)) {
      worst = gap;
      where = "theta=" + AngleLabel(theta);
    }
  }
  a.pass = worst <= rel;
  a.detail = "largest relative change " + Fixed(worst, 6) + " at " + where;
  return a;
}

Assertion PrivateSymmetry(const std::vector<SweepRecord>& records,
                          double rel) {
  Assertion a{"private power ratios of the two users agree within " +
                  Fixed(100 * rel, 0) + "%",
              true, ""};
  double worst = 0.0;
  std::string where = "-";
  for (const auto& r : records) {
    if (!r.has_solution()) continue;
    const double p1 = r.power_ratios[1];
    const double p2 = r.power_ratios[2];
    const double diff = std::abs(p1 - p2) / std::max({p1, p2, 1e-12});
    if (diff > worst) {
      worst = diff;
      where = std::string(ToString(r.mode)) + " " + Cell(r.theta, r.threshold);
    }
  }
  a.pass = worst <= rel;
  a.detail = "largest relative difference " + Fixed(worst, 6) + " at " + where;
  return a;
}

Assertion MulpHalfSplit(const std::vector<SweepRecord>& records, double tol) {
  Assertion a{"MULP private power ratios equal 0.5 +/- " + Fixed(tol, 2), true,
              ""};
  double worst = 0.0;
  std::string where = "-";
  for (const auto& r : records) {
    if (r.mode != Scheme::kMulp || !r.has_solution()) continue;
    for (int k = 1; k < r.power_ratios.size(); ++k) {
      const double dev = std::abs(r.power_ratios[k] - 0.5);
      if (dev > worst) {
        worst = dev;
        where = Cell(r.theta, r.threshold);
      }
    }
  }
  a.pass = worst <= tol;
  a.detail = "largest deviation " + Fixed(worst, 6) + " at " + where;
  return a;
}

bool NearOrthogonal(double theta) {
  return theta >= 3.0 * std::numbers::pi / 9.0 - 1e-12;
}

Assertion Coincide(const std::vector<SweepRecord>& records, double rel) {
  Assertion a{"RS and MULP WSR within " + Fixed(100 * rel, 0) +
                  "% for theta >= 3pi/9",
              true, ""};
  double worst = 0.0;
  std::string where = "-";
  for (const auto& m : records) {
    if (m.mode != Scheme::kMulp || !NearOrthogonal(m.theta)) continue;
    const SweepRecord* r = Find(records, m.theta, Scheme::kRs, m.threshold);
    double gap = std::numeric_limits<double>::infinity();
    if (r && r->has_solution() && m.has_solution()) {
      gap = std::abs(r->wsr - m.wsr) / m.wsr;
    }
    if (gap > worst || std::isinf(gap)) {
      worst = gap;
      where = Cell(m.theta, m.threshold);
    }
  }
  a.pass = worst <= rel;
  a.detail = "largest relative gap " + Fixed(worst, 6) + " at " + where;
  return a;
}

Assertion SameAllocation(const std::vector<SweepRecord>& records, double tol) {
  Assertion a{"RS and MULP private power ratios within " + Fixed(tol, 2) +
                  " for theta >= 3pi/9",
              true, ""};
  double worst = 0.0;
  std::string where = "-";
  for (const auto& m : records) {
    if (m.mode != Scheme::kMulp || !NearOrthogonal(m.theta)) continue;
    const SweepRecord* r = Find(records, m.theta, Scheme::kRs, m.threshold);
    double dev = std::numeric_limits<double>::infinity();
    if (r && r->has_solution() && m.has_solution()) {
      dev = (r->power_ratios.tail(2) - m.power_ratios.tail(2))
                .cwiseAbs()
                .maxCoeff();
    }
    if (dev > worst || std::isinf(dev)) {
      worst = dev;
      where = Cell(m.theta, m.threshold);
    }
  }
  a.pass = worst <= tol;
  a.detail = "largest difference " + Fixed(worst, 6) + " at " + where;
  return a;
}

const AverageRow* FindRow(const std::vector<AverageRow>& rows, Scheme mode,
                          double threshold) {
  for (const auto& r : rows) {
    if (r.mode == mode && r.threshold == threshold) return &r;
  }
  return nullptr;
}

Assertion MeanDominates(const std::vector<AverageRow>& rows) {
  Assertion a{"mean RS WSR >= mean MULP WSR at every threshold", true, ""};
  double worst = std::numeric_limits<double>::infinity();
  std::string where = "-";
  for (const auto& m : rows) {
    if (m.mode != Scheme::kMulp) continue;
    const AverageRow* r = FindRow(rows, Scheme::kRs, m.threshold);
    const double margin = r ? r->mean_wsr - m.mean_wsr : kNaN;
    if (std::isnan(margin) || margin < worst) {
      worst = std::isnan(margin) ? -std::numeric_limits<double>::infinity()
                                 : margin;
      where = "rth=" + Fixed(m.threshold, 2);
    }
  }
  a.pass = worst >= 0.0;
  a.detail = "smallest margin " + Fixed(worst, 6) + " at " + where;
  return a;
}

Assertion MeanStable(const std::vector<AverageRow>& rows, double rel) {
  Assertion a{"mean RS WSR at the largest threshold within " +
                  Fixed(100 * rel, 0) + "% of threshold 0",
              true, ""};
  const AverageRow* lo = FindRow(rows, Scheme::kRs, 0.0);
  const AverageRow* hi = nullptr;
  for (const auto& r : rows) {
    if (r.mode == Scheme::kRs && (!hi || r.threshold > hi->threshold)) hi = &r;
  }
  if (!lo || !hi || std::isnan(lo->mean_wsr) || std::isnan(hi->mean_wsr)) {
    a.pass = false;
    a.detail = "missing averages";
    return a;
  }
  const double change = std::abs(hi->mean_wsr - lo->mean_wsr) / lo->mean_wsr;
  a.pass = change <= rel;
  a.detail = "relative change " + Fixed(change, 6);
  return a;
}

}  // namespace

std::string_view ToString(ScenarioKind kind) {
  return kind == ScenarioKind::kSpecific ? "specific" : "random";
}

std::vector<double> DefaultThresholdGrid() {
  std::vector<double> grid;
  for (int i = 0; i <= 10; ++i) grid.push_back(i / 5.0);
  return grid;
}

double DbToLinear(double db) { return std::pow(10.0, db / 10.0); }

void ScenarioSpec::Validate() const {
  if (n_tx < 1 || n_users < 1) {
    throw std::invalid_argument("scenario needs at least one antenna and user");
  }
  if (threshold_grid.empty()) {
    throw std::invalid_argument("threshold grid is empty");
  }
  for (std::size_t i = 0; i < threshold_grid.size(); ++i) {
    if (!(threshold_grid[i] >= 0.0) ||
        (i > 0 && threshold_grid[i] < threshold_grid[i - 1])) {
      throw std::invalid_argument(
          "threshold grid must be nonnegative and nondecreasing");
    }
  }
  if (kind == ScenarioKind::kSpecific) {
    if (n_users != 2) {
      throw std::invalid_argument("specific channels are defined for 2 users");
    }
    if (theta_list.empty()) throw std::invalid_argument("theta list is empty");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
      throw std::invalid_argument("gamma must be positive");
    }
  } else if (n_channels < 1) {
    throw std::invalid_argument("random scenario needs at least one channel");
  }
  if (modes.empty()) throw std::invalid_argument("no modes selected");
  if (!std::isfinite(power_budget_db)) {
    throw std::invalid_argument("power budget must be finite");
  }
  Config(threshold_grid.front()).Validate();
  sca.Validate();
}

SystemConfig ScenarioSpec::Config(double threshold) const {
  SystemConfig cfg = SystemConfig::Symmetric(n_tx, n_users, power_budget(),
                                             noise_var, threshold);
  if (weights.size() > 0) cfg.weights = weights;
  return cfg;
}

std::vector<SweepRecord> RunSpecificSweep(const ScenarioSpec& spec,
                                          int workers) {
  if (spec.kind != ScenarioKind::kSpecific) {
    throw std::invalid_argument("RunSpecificSweep needs a specific scenario");
  }
  spec.Validate();
  const int n_theta = static_cast<int>(spec.theta_list.size());
  const int n_thr = static_cast<int>(spec.threshold_grid.size());
  std::vector<std::vector<SweepRecord>> cells(
      static_cast<std::size_t>(n_theta * n_thr));
  ParallelFor(n_theta * n_thr, workers, [&](int i) {
    const double theta = spec.theta_list[i / n_thr];
    const ChannelMatrix h = SpecificChannels(spec.n_tx, theta, spec.gamma);
    cells[i] = SolveCell(spec, h, theta, spec.gamma, 0,
                         spec.threshold_grid[i % n_thr]);
  });
  std::vector<SweepRecord> out;
  for (int a = 0; a < n_theta; ++a) {
    for (std::size_t m = 0; m < spec.modes.size(); ++m) {
      for (int b = 0; b < n_thr; ++b) {
        out.push_back(std::move(cells[a * n_thr + b][m]));
      }
    }
  }
  return out;
}

RandomAverage RunRandomAverage(const ScenarioSpec& spec, int workers) {
  if (spec.kind != ScenarioKind::kRandom) {
    throw std::invalid_argument("RunRandomAverage needs a random scenario");
  }
  spec.Validate();
  const int n_ch = spec.n_channels;
  const int n_thr = static_cast<int>(spec.threshold_grid.size());
  std::vector<ChannelMatrix> channels;
  channels.reserve(static_cast<std::size_t>(n_ch));
  for (int c = 0; c < n_ch; ++c) {
    channels.push_back(RandomChannels(spec.n_users, spec.n_tx,
                                      spec.seed + static_cast<std::uint64_t>(c)));
  }
  std::vector<std::vector<SweepRecord>> cells(
      static_cast<std::size_t>(n_ch * n_thr));
  ParallelFor(n_ch * n_thr, workers, [&](int i) {
    const int c = i / n_thr;
    cells[i] = SolveCell(spec, channels[c], kNaN, kNaN, c,
                         spec.threshold_grid[i % n_thr]);
  });
  RandomAverage out;
  for (std::size_t m = 0; m < spec.modes.size(); ++m) {
    for (int b = 0; b < n_thr; ++b) {
      for (int c = 0; c < n_ch; ++c) {
        out.records.push_back(std::move(cells[c * n_thr + b][m]));
      }
    }
  }
  out.summary = Summarize(out.records);
  return out;
}

std::vector<AverageRow> Summarize(const std::vector<SweepRecord>& records) {
  std::vector<AverageRow> rows;
  std::map<std::pair<Scheme, double>, std::size_t> index;
  std::vector<double> sums;
  for (const auto& r : records) {
    const auto key = std::make_pair(r.mode, r.threshold);
    auto it = index.find(key);
    if (it == index.end()) {
      it = index.emplace(key, rows.size()).first;
      rows.push_back({r.mode, r.threshold, 0.0, 0, 0});
      sums.push_back(0.0);
    }
    AverageRow& row = rows[it->second];
    ++row.total;
    if (r.status == ScaStatus::kConverged && r.has_solution()) {
      ++row.converged;
      sums[it->second] += r.wsr;
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].mean_wsr =
        rows[i].converged > 0 ? sums[i] / rows[i].converged : kNaN;
  }
  return rows;
}

std::vector<ChartSeries> WsrSeries(const std::vector<SweepRecord>& records) {
  const auto grid = Thresholds(records);
  std::vector<ChartSeries> out;
  for (double theta : Thetas(records)) {
    for (Scheme mode : {Scheme::kRs, Scheme::kMulp}) {
      ChartSeries s;
      bool any = false;
      for (double thr : grid) {
        const SweepRecord* r = Find(records, theta, mode, thr);
        any = any || r != nullptr;
        s.x.push_back(thr);
        s.y.push_back(r && r->has_solution() ? r->wsr : kNaN);
      }
      if (!any) continue;
      s.label = std::string(ToString(mode)) +
                (std::isnan(theta) ? "" : " theta=" + AngleLabel(theta));
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<ChartSeries> PowerRatioSeries(
    const std::vector<SweepRecord>& records) {
  const auto grid = Thresholds(records);
  int k = 2;
  for (const auto& r : records) {
    if (r.has_solution()) {
      k = static_cast<int>(r.power_ratios.size()) - 1;
      break;
    }
  }
  std::vector<ChartSeries> out;
  for (double theta : Thetas(records)) {
    for (Scheme mode : {Scheme::kRs, Scheme::kMulp}) {
      for (int stream = mode == Scheme::kRs ? 0 : 1; stream <= k; ++stream) {
        ChartSeries s;
        bool any = false;
        for (double thr : grid) {
          const SweepRecord* r = Find(records, theta, mode, thr);
          any = any || r != nullptr;
          s.x.push_back(thr);
          s.y.push_back(r && r->has_solution() ? r->power_ratios[stream]
                                               : kNaN);
        }
        if (!any) continue;
        s.label = std::string(ToString(mode)) +
                  (stream == 0 ? " common" : " private " + std::to_string(stream)) +
                  (std::isnan(theta) ? "" : " theta=" + AngleLabel(theta));
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<ChartSeries> AverageSeries(const std::vector<AverageRow>& rows) {
  std::vector<double> grid;
  for (const auto& r : rows) grid.push_back(r.threshold);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  std::vector<ChartSeries> out;
  for (Scheme mode : {Scheme::kRs, Scheme::kMulp}) {
    ChartSeries s;
    s.label = std::string(ToString(mode));
    bool any = false;
    for (double thr : grid) {
      const AverageRow* r = FindRow(rows, mode, thr);
      any = any || r != nullptr;
      s.x.push_back(thr);
      s.y.push_back(r ? r->mean_wsr : kNaN);
    }
    if (any) out.push_back(std::move(s));
  }
  return out;
}

const std::vector<std::string>& FigureIds() {
  static const std::vector<std::string> ids{"fig2", "fig3", "fig4",
                                            "fig5", "fig6a", "fig6b"};
  return ids;
}

ScenarioSpec FigureScenario(std::string_view figure) {
  ScenarioSpec spec;
  const double pi = std::numbers::pi;
  if (figure == "fig2" || figure == "fig3" || figure == "fig4" ||
      figure == "fig5") {
    spec.kind = ScenarioKind::kSpecific;
    spec.theta_list = {pi / 9, 2 * pi / 9, 3 * pi / 9, 4 * pi / 9};
    const bool wide = figure == "fig4" || figure == "fig5";
    spec.n_tx = wide ? 4 : 2;
    spec.gamma = wide ? 0.3 : 1.0;
    return spec;
  }
  if (figure == "fig6a" || figure == "fig6b") {
    spec.kind = ScenarioKind::kRandom;
    spec.n_tx = figure == "fig6a" ? 2 : 4;
    spec.n_channels = 100;
    spec.seed = 0;
    return spec;
  }
  throw std::invalid_argument("unknown figure id: " + std::string(figure));
}

std::vector<Assertion> FigureAssertions(std::string_view figure,
                                        const std::vector<SweepRecord>& records,
                                        const std::vector<AverageRow>& summary) {
  if (figure == "fig2") {
    return {RsDominates(records, 1e-3), ThresholdMonotone(records, 0.02),
            FlatStart(records, 0.01)};
  }
  if (figure == "fig3") {
    return {PrivateSymmetry(records, 0.05), MulpHalfSplit(records, 0.02)};
  }
  if (figure == "fig4") {
    return {Coincide(records, 0.03), ThresholdMonotone(records, 0.02)};
  }
  if (figure == "fig5") return {SameAllocation(records, 0.05)};
  if (figure == "fig6a") return {MeanDominates(summary)};
  if (figure == "fig6b") {
    return {MeanDominates(summary), MeanStable(summary, 0.10)};
  }
  throw std::invalid_argument("unknown figure id: " + std::string(figure));
}

}  // namespace rsbeam
