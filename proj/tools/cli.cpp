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

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "rsbeam/experiments.hpp"
#include "rsbeam/model.hpp"
#include "rsbeam/optimizer.hpp"

namespace rsbeam::cli {
namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string Join(const Eigen::VectorXd& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) s += ' ';
    s += Num(v[i]);
  }
  return s;
}

double ParseNumber(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + text + "'");
  }
  return v;
}

struct ChannelFlags {
  bool specific = false;
  bool random = false;
  int n_tx = 2;
  int n_users = 2;
  std::string theta;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

struct SolveFlags {
  ChannelFlags channel;
  double pt_db = 20.0;
  double noise_var = 1.0;
  double rth = 0.0;
  std::string mode;
  double epsilon = 1e-4;
  int max_iterations = 200;
  int restarts = 4;
  std::string csv;
  bool timing = false;
};

struct ReproduceFlags {
  std::string figure;
  std::string outdir = ".";
  int jobs = 1;
  int channels = 0;
  std::vector<double> thresholds;
  bool timing = false;
};

void AddChannelOptions(CLI::App* cmd, ChannelFlags& f) {
  auto* specific = cmd->add_flag("--specific", f.specific,
                                 "two-user line-of-sight channel");
  auto* random =
      cmd->add_flag("--random", f.random, "i.i.d. Rayleigh channel");
  specific->excludes(random);
  random->excludes(specific);
  cmd->add_option("--nt", f.n_tx, "transmit antennas")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--users", f.n_users, "users (random channels only)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--theta", f.theta,
                  "phase step of user 2, e.g. 2pi/9 (specific channels)");
  cmd->add_option("--gamma", f.gamma, "strength of user 2 (specific channels)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", f.seed, "channel seed (random channels)");
}

ChannelMatrix BuildChannel(const ChannelFlags& f) {
  if (f.specific == f.random) {
    throw std::invalid_argument("choose exactly one of --specific or --random");
  }
  if (f.specific) {
    if (f.theta.empty()) {
      throw std::invalid_argument("--theta is required with --specific");
    }
    if (f.n_users != 2) {
      throw std::invalid_argument("specific channels have two users");
    }
    return SpecificChannels(f.n_tx, ParseAngle(f.theta), f.gamma);
  }
  if (!f.theta.empty()) {
    throw std::invalid_argument("--theta only applies to --specific");
  }
  return RandomChannels(f.n_users, f.n_tx, f.seed);
}

int CmdChannel(const ChannelFlags& f, std::ostream& out) {
  const ChannelMatrix h = BuildChannel(f);
  out << "n_tx: " << h.n_tx() << "\nn_users: " << h.n_users() << '\n';
  for (int k = 0; k < h.n_users(); ++k) {
    out << "h" << k + 1 << ":";
    for (int m = 0; m < h.n_tx(); ++m) {
      const std::complex<double> v = h.entries()(m, k);
      out << ' ' << Num(v.real()) << (v.imag() < 0 ? "-" : "+")
          << Num(std::abs(v.imag())) << 'j';
    }
    out << "\nnorm" << k + 1 << ": " << Num(h.user(k).norm()) << '\n';
  }
  for (int a = 0; a < h.n_users(); ++a) {
    for (int b = a + 1; b < h.n_users(); ++b) {
      const double c = std::abs(h.user(a).dot(h.user(b))) /
                       (h.user(a).norm() * h.user(b).norm());
      out << "correlation(" << a + 1 << "," << b + 1 << "): " << Num(c) << '\n';
    }
  }
  return kExitOk;
}

int CmdSolve(const SolveFlags& f, std::ostream& out) {
  const ChannelMatrix h = BuildChannel(f.channel);
  if (!(f.rth >= 0.0)) throw std::invalid_argument("--rth must be >= 0");
  const Scheme scheme = *ParseScheme(f.mode);
  SystemConfig cfg = SystemConfig::Symmetric(
      h.n_tx(), h.n_users(), DbToLinear(f.pt_db), f.noise_var, f.rth);
  ScaOptions opts;
  opts.epsilon = f.epsilon;
  opts.max_sca_iterations = f.max_iterations;
  opts.restarts = f.restarts;
  opts.seed = f.channel.seed;
  cfg.Validate();
  opts.Validate();

  const auto start = std::chrono::steady_clock::now();
  const ScaResult r = ScaSolve(cfg, h, opts, scheme);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  out << "mode: " << ToString(scheme) << '\n'
      << "status: " << ToString(r.status) << '\n'
      << "iterations: " << r.iterations << '\n'
      << "attempts: " << r.attempts << '\n';
  if (r.has_solution()) {
    const FeasibilityReport feas = CheckFeasible(cfg, h, r, 1e-4);
    out << "wsr: " << Num(r.wsr()) << '\n'
        << "secrecy: " << Join(r.report.secrecy) << '\n'
        << "power_ratios: " << Join(PowerRatios(*r.precoder, cfg.power_budget))
        << '\n'
        << "common_alloc: " << Join(r.precoder->common_alloc) << '\n'
        << "feasible: " << (feas.ok() ? "yes" : "no") << '\n';
  }
  if (f.timing) out << "seconds: " << Num(seconds) << '\n';

  if (!f.csv.empty()) {
    SweepRecord rec;
    rec.kind = f.channel.specific ? ScenarioKind::kSpecific
                                  : ScenarioKind::kRandom;
    rec.n_tx = h.n_tx();
    rec.theta = f.channel.specific ? ParseAngle(f.channel.theta)
                                   : std::nan("");
    rec.gamma = f.channel.specific ? f.channel.gamma : std::nan("");
    rec.channel = 0;
    rec.mode = scheme;
    rec.threshold = f.rth;
    rec.status = r.status;
    rec.iterations = r.iterations;
    rec.wsr = std::nan("");
    if (r.has_solution()) {
      rec.precoder = r.precoder;
      rec.wsr = r.wsr();
      rec.power_ratios = PowerRatios(*r.precoder, cfg.power_budget);
      rec.secrecy = r.report.secrecy;
    }
    EmitCsv({rec}, f.csv);
  }
  return r.status == ScaStatus::kInfeasible ||
                 r.status == ScaStatus::kSolverFailure
             ? kExitFailure
             : kExitOk;
}

int CmdReproduce(const ReproduceFlags& f, std::ostream& out) {
  ScenarioSpec spec = FigureScenario(f.figure);
  if (f.channels > 0) spec.n_channels = f.channels;
  if (!f.thresholds.empty()) spec.threshold_grid = f.thresholds;
  spec.Validate();

  namespace fs = std::filesystem;
  fs::create_directories(f.outdir);
  const fs::path base = fs::path(f.outdir) / f.figure;
  const std::string csv = base.string() + ".csv";
  const std::string svg = base.string() + ".svg";

  const auto start = std::chrono::steady_clock::now();
  std::vector<SweepRecord> records;
  std::vector<AverageRow> summary;
  if (spec.kind == ScenarioKind::kSpecific) {
    records = RunSpecificSweep(spec, f.jobs);
  } else {
    RandomAverage avg = RunRandomAverage(spec, f.jobs);
    records = std::move(avg.records);
    summary = std::move(avg.summary);
  }
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  int converged = 0;
  for (const auto& r : records) converged += r.status == ScaStatus::kConverged;
  out << "figure: " << f.figure << '\n'
      << "scenario: " << ToString(spec.kind) << " n_tx=" << spec.n_tx;
  if (spec.kind == ScenarioKind::kSpecific) {
    out << " gamma=" << Num(spec.gamma) << " thetas=" << spec.theta_list.size();
  } else {
    out << " channels=" << spec.n_channels << " seed=" << spec.seed;
  }
  out << " pt_db=" << Num(spec.power_budget_db)
      << " thresholds=" << spec.threshold_grid.size() << '\n'
      << "cells: " << records.size() << " converged: " << converged << '\n';
  for (const auto& r : records) {
    if (r.status == ScaStatus::kConverged) continue;
    out << "cell " << ToString(r.mode) << " rth=" << Num(r.threshold);
    if (spec.kind == ScenarioKind::kSpecific) {
      out << " theta=" << Num(r.theta);
    } else {
      out << " channel=" << r.channel;
    }
    out << ": " << ToString(r.status) << '\n';
  }

  EmitCsv(records, csv);
  out << "wrote: " << csv << '\n';
  ChartAxes axes;
  axes.x_label = "secrecy threshold (bits/s/Hz)";
  std::vector<ChartSeries> series;
  if (f.figure == "fig3" || f.figure == "fig5") {
    axes.title = f.figure + ": power ratios";
    axes.y_label = "power ratio";
    series = PowerRatioSeries(records);
  } else if (spec.kind == ScenarioKind::kSpecific) {
    axes.title = f.figure + ": weighted sum rate";
    axes.y_label = "WSR (bits/s/Hz)";
    series = WsrSeries(records);
  } else {
    axes.title = f.figure + ": mean weighted sum rate";
    axes.y_label = "mean WSR (bits/s/Hz)";
    series = AverageSeries(summary);
    const std::string summary_csv = base.string() + "_summary.csv";
    EmitSummaryCsv(summary, summary_csv);
    out << "wrote: " << summary_csv << '\n';
  }
  EmitChart(series, svg, axes);
  out << "wrote: " << svg << '\n';

  for (const auto& a : FigureAssertions(f.figure, records, summary)) {
    out << (a.pass ? "PASS " : "FAIL ") << a.name << " (" << a.detail << ")\n";
  }
  if (f.timing) out << "seconds: " << Num(seconds) << '\n';
  return kExitOk;
}

}  // namespace

double ParseAngle(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch != ' ') s.push_back(ch);
  }
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return ParseNumber(s);
  std::string coef = s.substr(0, pos);
  if (!coef.empty() && coef.back() == '*') coef.pop_back();
  double value = std::numbers::pi;
  if (coef == "-") {
    value = -value;
  } else if (!coef.empty()) {
    value *= ParseNumber(coef);
  }
  const std::string rest = s.substr(pos + 2);
  if (!rest.empty()) {
    if (rest[0] != '/') throw std::invalid_argument("bad angle: '" + text + "'");
    const double den = ParseNumber(rest.substr(1));
    if (den == 0.0) throw std::invalid_argument("bad angle: '" + text + "'");
    value /= den;
  }
  return value;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Secure rate-splitting beamforming by successive convex "
               "approximation",
               args.empty() ? "rsbeam" : args[0]};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value file mirroring the flags");

  ChannelFlags channel_flags;
  auto* channel = app.add_subcommand("channel", "print a channel matrix");
  AddChannelOptions(channel, channel_flags);

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "run one optimization");
  AddChannelOptions(solve, solve_flags.channel);
  solve->add_option("--pt-db", solve_flags.pt_db, "power budget in dB");
  solve->add_option("--noise", solve_flags.noise_var, "noise variance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--rth", solve_flags.rth, "secrecy threshold per user")
      ->required();
  solve->add_option("--mode", solve_flags.mode, "rs or mulp")
      ->required()
      ->check(CLI::IsMember({"rs", "mulp"}));
  solve->add_option("--epsilon", solve_flags.epsilon, "convergence tolerance")
      ->check(CLI::PositiveNumber);
  solve->add_option("--max-iterations", solve_flags.max_iterations)
      ->check(CLI::PositiveNumber);
  solve->add_option("--restarts", solve_flags.restarts)
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--csv", solve_flags.csv, "also write the result as CSV");
  solve->add_flag("--timing", solve_flags.timing, "print elapsed time");

  ReproduceFlags repro_flags;
  auto* reproduce =
      app.add_subcommand("reproduce", "run a canonical figure scenario");
  reproduce->add_option("figure", repro_flags.figure, "figure id")
      ->required()
      ->check(CLI::IsMember(FigureIds()));
  reproduce
      ->add_option("--outdir", repro_flags.outdir, "directory for CSV and SVG")
      ->envname("RSBEAM_OUTDIR");
  reproduce->add_option("--jobs", repro_flags.jobs, "worker threads")
      ->check(CLI::PositiveNumber);
  reproduce
      ->add_option("--channels", repro_flags.channels,
                   "override the number of random channels")
      ->check(CLI::PositiveNumber);
  reproduce
      ->add_option("--thresholds", repro_flags.thresholds,
                   "override the threshold grid, comma separated")
      ->delimiter(',');
  reproduce->add_flag("--timing", repro_flags.timing, "print elapsed time");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  // Buffer the report so a usage error never leaves partial output.
  std::ostringstream buffer;
  try {
    int code = kExitOk;
    if (channel->parsed()) code = CmdChannel(channel_flags, buffer);
    if (solve->parsed()) code = CmdSolve(solve_flags, buffer);
    if (reproduce->parsed()) code = CmdReproduce(repro_flags, buffer);
    out << buffer.str();
    return code;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n' << "Run with --help for more information.\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    out << buffer.str();
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace rsbeam::cli
