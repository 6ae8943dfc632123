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

#include "rsbeam/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace rsbeam {
namespace {

constexpr double kLn2 = std::numbers::ln2;

// Streams with less power than this fraction of the budget are re-seeded
// before linearizing: a zero stream pins its SINR surrogate to zero and
// leaves the subproblem without interior.
constexpr double kSeedPowerFraction = 1e-6;

// Coefficients of Re(h^H p_s) and Im(h^H p_s) over the program variables.
struct GainRows {
  Eigen::RowVectorXd re;
  Eigen::RowVectorXd im;
};

GainRows Gain(const VariableMap& map, const Eigen::VectorXcd& h, int stream) {
  const int n = map.n_vars();
  const int nt = map.n_tx();
  GainRows rows{Eigen::RowVectorXd::Zero(n), Eigen::RowVectorXd::Zero(n)};
  const int off = map.stream(stream);
  for (int m = 0; m < nt; ++m) {
    const double hr = h[m].real();
    const double hi = h[m].imag();
    rows.re[off + m] = hr;
    rows.re[off + nt + m] = hi;
    rows.im[off + m] = -hi;
    rows.im[off + nt + m] = hr;
  }
  return rows;
}

// Row of Re(conj(h^H p0) * h^H p), the linear part of |h^H p|^2 around p0.
Eigen::RowVectorXd TangentRow(const VariableMap& map, const Eigen::VectorXcd& h,
                              int stream, const Eigen::VectorXcd& p0) {
  const Complex g0 = h.dot(p0);
  const GainRows rows = Gain(map, h, stream);
  return g0.real() * rows.re + g0.imag() * rows.im;
}

const Eigen::VectorXcd& StreamPrecoder(const Precoder& p, int stream) {
  return stream == 0 ? p.common : p.priv[stream - 1];
}

Eigen::VectorXcd DominantLeftSingularVector(const ChannelMatrix& channel) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(channel.entries(), Eigen::ComputeThinU);
  return svd.matrixU().col(0);
}

// Gives every stream at least a small amount of power along a
// channel-matched direction, keeping the total within budget.
Precoder SeedStreams(const ChannelMatrix& channel, Precoder p, double power,
                     Scheme scheme) {
  const double floor = kSeedPowerFraction * power;
  bool changed = false;
  if (scheme == Scheme::kRs && p.common.squaredNorm() < floor) {
    p.common = std::sqrt(floor) * DominantLeftSingularVector(channel);
    changed = true;
  }
  for (int k = 0; k < p.n_users(); ++k) {
    if (std::norm(channel.user(k).dot(p.priv[k])) < floor * 1e-6) {
      const Eigen::VectorXcd h = channel.user(k);
      p.priv[k] += std::sqrt(floor) * h / h.norm();
      changed = true;
    }
  }
  if (changed) {
    const double used = TransmitPower(p);
    if (used > power) {
      const double scale = std::sqrt(power / used);
      p.common *= scale;
      for (auto& v : p.priv) v *= scale;
    }
  }
  return p;
}

void AddRow(cone::ConeProgram& prog, const Eigen::RowVectorXd& row,
            double offset, std::string label) {
  prog.add_block(row, Eigen::VectorXd::Constant(1, offset),
                 cone::ConeKind::kNonnegative, std::move(label));
}

std::string Tag(std::string_view name, int k) {
  return std::string(name) + "(" + std::to_string(k + 1) + ")";
}

std::string Tag(std::string_view name, int k, int j) {
  return std::string(name) + "(" + std::to_string(k + 1) + "," +
         std::to_string(j + 1) + ")";
}

}  // namespace

std::string_view ToString(Scheme scheme) {
  return scheme == Scheme::kRs ? "rs" : "mulp";
}

std::string_view ToString(ScaStatus status) {
  switch (status) {
    case ScaStatus::kConverged:
      return "converged";
    case ScaStatus::kMaxIterations:
      return "max_iterations";
    case ScaStatus::kInfeasible:
      return "infeasible";
    case ScaStatus::kSolverFailure:
      return "solver_failure";
  }
  return "unknown";
}

std::optional<Scheme> ParseScheme(std::string_view name) {
  if (name == "rs") return Scheme::kRs;
  if (name == "mulp") return Scheme::kMulp;
  return std::nullopt;
}

std::optional<ScaStatus> ParseScaStatus(std::string_view name) {
  for (ScaStatus s : {ScaStatus::kConverged, ScaStatus::kMaxIterations,
                      ScaStatus::kInfeasible, ScaStatus::kSolverFailure}) {
    if (ToString(s) == name) return s;
  }
  return std::nullopt;
}

void ScaOptions::Validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(lambda_init >= 0.0 && lambda_init <= 1.0)) {
    throw std::invalid_argument("lambda_init must lie in [0, 1]");
  }
  if (max_sca_iterations < 1 || restarts < 0) {
    throw std::invalid_argument("iteration counts must be positive");
  }
}

VariableMap::VariableMap(int n_tx, int n_users, Scheme scheme,
                         std::vector<bool> wiretap_active, bool secrecy_slack)
    : n_tx_(n_tx),
      n_users_(n_users),
      scheme_(scheme),
      wiretap_active_(std::move(wiretap_active)) {
  if (static_cast<int>(wiretap_active_.size()) != n_users) {
    throw std::invalid_argument("wiretap flags need one entry per user");
  }
  const int k = n_users;
  const bool rs = scheme == Scheme::kRs;
  int next = 0;
  alloc_ = next;
  next += rs ? k : 0;
  precoder_ = next;
  next += (k + (rs ? 1 : 0)) * 2 * n_tx;
  alpha_c_ = next;
  next += rs ? k : 0;
  alpha_p_ = next;
  next += k;
  beta_c_ = next;
  next += rs ? k : 0;
  beta_p_ = next;
  next += k;
  rho_c_ = next;
  next += rs ? k : 0;
  rho_p_ = next;
  next += k;
  wiretap_slot_.assign(static_cast<std::size_t>(k * k), -1);
  int pairs = 0;
  for (int owner = 0; owner < k; ++owner) {
    if (!wiretap_active_[owner]) continue;
    for (int eve = 0; eve < k; ++eve) {
      if (eve != owner) wiretap_slot_[owner * k + eve] = pairs++;
    }
  }
  alpha_x_ = next;
  next += pairs;
  rho_x_ = next;
  next += pairs;
  slack_slot_.assign(static_cast<std::size_t>(k), -1);
  if (secrecy_slack) {
    for (int owner = 0; owner < k; ++owner) {
      if (wiretap_active_[owner]) slack_slot_[owner] = next++;
    }
  }
  n_vars_ = next;
}

int VariableMap::stream(int s) const {
  if (s == 0) return has_common() ? precoder_ : -1;
  return precoder_ + (s - (has_common() ? 0 : 1)) * 2 * n_tx_;
}

int VariableMap::alpha_x(int k, int j) const {
  const int slot = wiretap_slot_[k * n_users_ + j];
  return slot < 0 ? -1 : alpha_x_ + slot;
}

int VariableMap::slack(int k) const {
  return slack_slot_[k];
}

int VariableMap::rho_x(int k, int j) const {
  const int slot = wiretap_slot_[k * n_users_ + j];
  return slot < 0 ? -1 : rho_x_ + slot;
}

Precoder InitPrecoder(const ChannelMatrix& channel, double power_budget,
                      double lambda, double noise_var) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0, 1]");
  }
  if (!(power_budget > 0.0)) {
    throw std::invalid_argument("power budget must be positive");
  }
  const int k = channel.n_users();
  Precoder p = Precoder::Zero(channel.n_tx(), k);
  const double private_amp = std::sqrt(lambda * power_budget / k);
  for (int i = 0; i < k; ++i) {
    const Eigen::VectorXcd h = channel.user(i);
    p.priv[i] = private_amp * h / h.norm();
  }
  p.common = std::sqrt((1.0 - lambda) * power_budget) *
             DominantLeftSingularVector(channel);
  const SinrTable sinr = ComputeSinrs(channel, p, noise_var);
  const double common_rate =
      sinr.common.unaryExpr([](double s) { return std::log2(1.0 + s); })
          .minCoeff();
  p.common_alloc = Eigen::VectorXd::Constant(k, common_rate / k);
  return p;
}

AuxiliaryState InitAux(const ChannelMatrix& channel, const Precoder& precoder,
                       double noise_var) {
  const SinrTable sinr = ComputeSinrs(channel, precoder, noise_var);
  const int k = channel.n_users();
  AuxiliaryState aux;
  aux.precoder = precoder;
  aux.beta_c.resize(k);
  aux.beta_p.resize(k);
  for (int user = 0; user < k; ++user) {
    const Eigen::VectorXcd h = channel.user(user);
    double all = 0.0;
    double others = 0.0;
    for (int j = 0; j < k; ++j) {
      const double g = std::norm(h.dot(precoder.priv[j]));
      all += g;
      if (j != user) others += g;
    }
    aux.beta_c[user] = all + noise_var;
    aux.beta_p[user] = others + noise_var;
  }
  auto rate = [](double s) { return std::log2(1.0 + s); };
  aux.rho_c = sinr.common;
  aux.rho_p = sinr.priv;
  aux.rho_x = sinr.wiretap;
  aux.alpha_c = aux.rho_c.unaryExpr(rate);
  aux.alpha_p = aux.rho_p.unaryExpr(rate);
  aux.alpha_x = aux.rho_x.unaryExpr(rate);
  return aux;
}

Subproblem BuildSubproblem(const SystemConfig& config,
                           const ChannelMatrix& channel,
                           const AuxiliaryState& point, Scheme scheme,
                           const SubproblemOptions& sub_options) {
  config.Validate();
  const int k = config.n_users;
  const int nt = config.n_tx;
  if (channel.n_users() != k || channel.n_tx() != nt ||
      point.precoder.n_users() != k || point.precoder.n_tx() != nt) {
    throw std::invalid_argument("configuration, channel and point disagree");
  }
  const bool rs = scheme == Scheme::kRs;
  if ((point.beta_p.array() <= 0.0).any() ||
      (rs && (point.beta_c.array() <= 0.0).any())) {
    throw std::invalid_argument("degenerate linearization point: beta <= 0");
  }
  const double noise = config.noise_var;

  std::vector<bool> active(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    active[i] = k > 1 && config.secrecy_thresholds[i] > 0.0;
  }
  const bool pursuit = sub_options.secrecy_penalty > 0.0;
  VariableMap map(nt, k, scheme, active, pursuit);
  const int n = map.n_vars();
  cone::ConeProgram prog(n);
  const Precoder& p0 = point.precoder;

  Eigen::VectorXd objective = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) {
    objective[map.alpha_p(i)] = config.weights[i];
    if (rs) objective[map.alloc(i)] = config.weights[i];
    if (map.slack(i) >= 0) objective[map.slack(i)] = -sub_options.secrecy_penalty;
  }
  prog.set_objective(std::move(objective));

  auto unit = [n](int var, double coeff = 1.0) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(n);
    row[var] = coeff;
    return row;
  };

  // Secrecy: alpha_p(k) - alpha_x(k, j) >= threshold.
  for (int i = 0; i < k; ++i) {
    if (!map.wiretap_active(i)) continue;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      Eigen::RowVectorXd row = unit(map.alpha_p(i)) - unit(map.alpha_x(i, j));
      double offset = -config.secrecy_thresholds[i];
      if (pursuit) {
        row[map.slack(i)] = 1.0;
        offset -= sub_options.secrecy_margin;
      }
      AddRow(prog, row, offset, Tag("secrecy", i, j));
    }
  }

  // Common-rate decodability: sum_j C_j <= alpha_c(k).
  if (rs) {
    for (int i = 0; i < k; ++i) {
      Eigen::RowVectorXd row = unit(map.alpha_c(i));
      for (int j = 0; j < k; ++j) row[map.alloc(j)] -= 1.0;
      AddRow(prog, row, 0.0, Tag("common_rate", i));
    }
  }

  // 2^alpha <= 1 + rho as (alpha ln 2, 1, 1 + rho) in the exponential cone.
  auto add_rate = [&](int alpha, int rho, std::string label) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, n);
    a(0, alpha) = kLn2;
    a(2, rho) = 1.0;
    prog.add_block(std::move(a), Eigen::Vector3d(0.0, 1.0, 1.0),
                   cone::ConeKind::kExponential, std::move(label));
  };
  for (int i = 0; i < k; ++i) {
    if (rs) add_rate(map.alpha_c(i), map.rho_c(i), Tag("rate_c", i));
    add_rate(map.alpha_p(i), map.rho_p(i), Tag("rate_p", i));
  }

  // Wiretap rate: 1 + rho_x <= 2^a0 (1 + ln2 (alpha_x - a0)).
  for (int i = 0; i < k; ++i) {
    if (!map.wiretap_active(i)) continue;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double a0 = point.alpha_x(i, j);
      const double e0 = std::exp2(a0);
      AddRow(prog, unit(map.alpha_x(i, j), e0 * kLn2) - unit(map.rho_x(i, j)),
             e0 * (1.0 - kLn2 * a0) - 1.0, Tag("wiretap_rate", i, j));
    }
  }

  // Interference bounds: sum_{j in S} |h_k^H p_j|^2 + noise <= beta.
  auto add_interference = [&](int user, int beta, bool include_own,
                              std::string label) {
    const Eigen::VectorXcd h = channel.user(user);
    std::vector<GainRows> gains;
    for (int j = 0; j < k; ++j) {
      if (j != user || include_own) gains.push_back(Gain(map, h, 1 + j));
    }
    if (gains.empty()) {
      AddRow(prog, unit(beta), -noise, std::move(label));
      return;
    }
    const auto rows = static_cast<Eigen::Index>(2 + 2 * gains.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);
    a(0, beta) = 1.0;
    b[0] = -noise;
    b[1] = 0.5;
    for (std::size_t g = 0; g < gains.size(); ++g) {
      a.row(static_cast<Eigen::Index>(2 + 2 * g)) = gains[g].re;
      a.row(static_cast<Eigen::Index>(3 + 2 * g)) = gains[g].im;
    }
    prog.add_block(std::move(a), std::move(b),
                   cone::ConeKind::kRotatedSecondOrder, std::move(label));
  };
  for (int i = 0; i < k; ++i) {
    if (rs) add_interference(i, map.beta_c(i), true, Tag("interference_c", i));
    add_interference(i, map.beta_p(i), false, Tag("interference_p", i));
  }

  // SINR lower bound from the tangent of |h^H p|^2 / beta at (p0, beta0):
  // 2 Re(p0^H h h^H p) / beta0 - |h^H p0|^2 beta / beta0^2 >= rho.
  auto add_sinr = [&](int user, int stream, int beta, int rho, double beta0,
                      std::string label) {
    const Eigen::VectorXcd h = channel.user(user);
    const Eigen::VectorXcd& p = StreamPrecoder(p0, stream);
    const double g0 = std::norm(h.dot(p));
    Eigen::RowVectorXd row = (2.0 / beta0) * TangentRow(map, h, stream, p);
    row[beta] -= g0 / (beta0 * beta0);
    row[rho] -= 1.0;
    AddRow(prog, row, 0.0, std::move(label));
  };
  for (int i = 0; i < k; ++i) {
    if (rs) {
      add_sinr(i, 0, map.beta_c(i), map.rho_c(i), point.beta_c[i],
               Tag("sinr_c", i));
    }
    add_sinr(i, 1 + i, map.beta_p(i), map.rho_p(i), point.beta_p[i],
             Tag("sinr_p", i));
  }

  // Wiretap SINR: |h_j^H p_k|^2 <= rho_x(k, j) * I_j(p), with I_j the
  // tangent of the residual interference at eavesdropper j.
  for (int i = 0; i < k; ++i) {
    if (!map.wiretap_active(i)) continue;
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const Eigen::VectorXcd h = channel.user(j);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(4, n);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(4);
      a(0, map.rho_x(i, j)) = 0.5;
      b[1] = noise;
      for (int other = 0; other < k; ++other) {
        if (other == i || other == j) continue;
        const Eigen::VectorXcd& q = p0.priv[other];
        a.row(1) += 2.0 * TangentRow(map, h, 1 + other, q);
        b[1] -= std::norm(h.dot(q));
      }
      const GainRows leak = Gain(map, h, 1 + i);
      a.row(2) = leak.re;
      a.row(3) = leak.im;
      prog.add_block(std::move(a), std::move(b),
                     cone::ConeKind::kRotatedSecondOrder,
                     Tag("wiretap_sinr", i, j));
    }
  }

  // Power: ||P||_F <= sqrt(P_t).
  {
    const int first = rs ? map.stream(0) : map.stream(1);
    const int count = (k + (rs ? 1 : 0)) * 2 * nt;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(1 + count, n);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(1 + count);
    b[0] = std::sqrt(config.power_budget);
    for (int v = 0; v < count; ++v) a(1 + v, first + v) = 1.0;
    prog.add_block(std::move(a), std::move(b), cone::ConeKind::kSecondOrder,
                   "power");
  }

  // Sign constraints on c, alpha and rho.
  {
    std::vector<int> vars;
    for (int i = 0; i < k; ++i) {
      if (rs) {
        vars.push_back(map.alloc(i));
        vars.push_back(map.alpha_c(i));
        vars.push_back(map.rho_c(i));
      }
      vars.push_back(map.alpha_p(i));
      vars.push_back(map.rho_p(i));
      for (int j = 0; j < k; ++j) {
        if (map.alpha_x(i, j) >= 0) {
          vars.push_back(map.alpha_x(i, j));
          vars.push_back(map.rho_x(i, j));
        }
      }
      if (map.slack(i) >= 0) vars.push_back(map.slack(i));
    }
    std::sort(vars.begin(), vars.end());
    Eigen::MatrixXd a =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vars.size()), n);
    for (std::size_t r = 0; r < vars.size(); ++r) {
      a(static_cast<Eigen::Index>(r), vars[r]) = 1.0;
    }
    prog.add_block(std::move(a), Eigen::VectorXd::Zero(a.rows()),
                   cone::ConeKind::kNonnegative, "sign");
  }

  return {std::move(prog), std::move(map)};
}

Eigen::VectorXd PackPoint(const VariableMap& map, const AuxiliaryState& point) {
  const int k = map.n_users();
  const int nt = map.n_tx();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(map.n_vars());
  auto put_stream = [&](int stream, const Eigen::VectorXcd& p) {
    const int off = map.stream(stream);
    if (off < 0) return;
    x.segment(off, nt) = p.real();
    x.segment(off + nt, nt) = p.imag();
  };
  put_stream(0, point.precoder.common);
  for (int i = 0; i < k; ++i) {
    put_stream(1 + i, point.precoder.priv[i]);
    x[map.alpha_p(i)] = point.alpha_p[i];
    x[map.beta_p(i)] = point.beta_p[i];
    x[map.rho_p(i)] = point.rho_p[i];
    if (map.has_common()) {
      x[map.alloc(i)] = point.precoder.common_alloc[i];
      x[map.alpha_c(i)] = point.alpha_c[i];
      x[map.beta_c(i)] = point.beta_c[i];
      x[map.rho_c(i)] = point.rho_c[i];
    }
    for (int j = 0; j < k; ++j) {
      if (map.alpha_x(i, j) < 0) continue;
      x[map.alpha_x(i, j)] = point.alpha_x(i, j);
      x[map.rho_x(i, j)] = point.rho_x(i, j);
    }
  }
  return x;
}

AuxiliaryState UnpackPoint(const VariableMap& map, const Eigen::VectorXd& x,
                           const ChannelMatrix& channel, double noise_var) {
  if (x.size() != map.n_vars()) {
    throw std::invalid_argument("point length does not match the map");
  }
  const int k = map.n_users();
  const int nt = map.n_tx();
  Precoder p = Precoder::Zero(nt, k);
  auto get_stream = [&](int stream) {
    Eigen::VectorXcd v(nt);
    const int off = map.stream(stream);
    for (int m = 0; m < nt; ++m) v[m] = Complex(x[off + m], x[off + nt + m]);
    return v;
  };
  if (map.has_common()) {
    p.common = get_stream(0);
    for (int i = 0; i < k; ++i) p.common_alloc[i] = x[map.alloc(i)];
  }
  for (int i = 0; i < k; ++i) p.priv[i] = get_stream(1 + i);

  AuxiliaryState aux = InitAux(channel, p, noise_var);
  for (int i = 0; i < k; ++i) {
    aux.alpha_p[i] = x[map.alpha_p(i)];
    aux.beta_p[i] = x[map.beta_p(i)];
    aux.rho_p[i] = x[map.rho_p(i)];
    if (map.has_common()) {
      aux.alpha_c[i] = x[map.alpha_c(i)];
      aux.beta_c[i] = x[map.beta_c(i)];
      aux.rho_c[i] = x[map.rho_c(i)];
    }
    for (int j = 0; j < k; ++j) {
      if (map.alpha_x(i, j) < 0) continue;
      aux.alpha_x(i, j) = x[map.alpha_x(i, j)];
      aux.rho_x(i, j) = x[map.rho_x(i, j)];
    }
  }
  return aux;
}

namespace {

struct Attempt {
  ScaStatus status = ScaStatus::kInfeasible;
  std::optional<AuxiliaryState> point;
  std::vector<double> trace;
  std::vector<double> exact_trace;
  double initial_wsr = 0.0;
  int iterations = 0;
  int pursuit_iterations = 0;
};

constexpr double kPursuitPenalty = 100.0;
constexpr double kPursuitMargin = 1e-4;
constexpr double kPursuitSlackTol = 1e-5;

struct PursuitOutcome {
  AuxiliaryState point;
  Eigen::VectorXd warm;
};

// Penalized SCA that drives the secrecy slack to zero. On success the point
// meets every secrecy row with a margin, and `warm` (slack removed) is
// strictly feasible for the unpenalized subproblem built at that point.
std::optional<PursuitOutcome> Pursue(const SystemConfig& config,
                                     const ChannelMatrix& channel,
                                     const ScaOptions& options, Scheme scheme,
                                     AuxiliaryState point, int& iterations) {
  SubproblemOptions sub_options;
  sub_options.secrecy_penalty = kPursuitPenalty;
  sub_options.secrecy_margin = kPursuitMargin;
  std::optional<Eigen::VectorXd> warm;
  double previous = 0.0;
  for (int n = 1; n <= options.max_sca_iterations; ++n) {
    Subproblem sub = BuildSubproblem(config, channel, point, scheme, sub_options);
    if (n == 1) {
      Eigen::VectorXd x = PackPoint(sub.map, point);
      for (int i = 0; i < config.n_users; ++i) {
        const int idx = sub.map.slack(i);
        if (idx < 0) continue;
        double worst = 0.0;
        for (int j = 0; j < config.n_users; ++j) {
          if (j != i) worst = std::max(worst, point.alpha_x(i, j));
        }
        x[idx] = std::max(0.0, config.secrecy_thresholds[i] + kPursuitMargin -
                                   point.alpha_p[i] + worst) +
                 1.0;
      }
      warm = std::move(x);
    }
    const cone::ConicSolution sol = cone::Solve(sub.program, options.solver, warm);
    iterations = n;
    if (sol.status != cone::SolveStatus::kOptimal) return std::nullopt;
    point = UnpackPoint(sub.map, sol.x, channel, config.noise_var);
    double slack = 0.0;
    int strict_vars = sub.map.n_vars();
    for (int i = 0; i < config.n_users; ++i) {
      const int idx = sub.map.slack(i);
      if (idx < 0) continue;
      slack = std::max(slack, sol.x[idx]);
      strict_vars = std::min(strict_vars, idx);
    }
    if (slack <= kPursuitSlackTol) {
      return PursuitOutcome{std::move(point), sol.x.head(strict_vars)};
    }
    if (n >= 2 && std::abs(sol.objective_value - previous) <= options.epsilon) {
      return std::nullopt;
    }
    previous = sol.objective_value;
    warm = sol.x;
  }
  return std::nullopt;
}

Attempt RunFrom(const SystemConfig& config, const ChannelMatrix& channel,
                const ScaOptions& options, Scheme scheme, Precoder start) {
  Attempt out;
  start = SeedStreams(channel, std::move(start), config.power_budget, scheme);
  if (scheme == Scheme::kMulp) {
    start.common.setZero();
    start.common_alloc.setZero();
  }
  AuxiliaryState point = InitAux(channel, start, config.noise_var);
  out.initial_wsr = Evaluate(channel, start, config).wsr;

  std::optional<Eigen::VectorXd> warm;
  bool pursued = false;
  for (int n = 1; n <= options.max_sca_iterations; ++n) {
    Subproblem sub = BuildSubproblem(config, channel, point, scheme);
    if (n == 1 && !warm) warm = PackPoint(sub.map, point);
    const cone::ConicSolution sol = cone::Solve(sub.program, options.solver, warm);
    if (sol.status != cone::SolveStatus::kOptimal) {
      if (n == 1 && !pursued && sol.status == cone::SolveStatus::kInfeasible) {
        pursued = true;
        auto found = Pursue(config, channel, options, scheme, point,
                            out.pursuit_iterations);
        if (found) {
          point = std::move(found->point);
          warm = std::move(found->warm);
          out.initial_wsr = Evaluate(channel, point.precoder, config).wsr;
          --n;
          continue;
        }
      }
      out.status = n == 1 && sol.status == cone::SolveStatus::kInfeasible
                       ? ScaStatus::kInfeasible
                       : ScaStatus::kSolverFailure;
      if (n == 1 && pursued) out.status = ScaStatus::kInfeasible;
      return out;
    }
    point = UnpackPoint(sub.map, sol.x, channel, config.noise_var);
    out.point = point;
    out.iterations = n;
    out.trace.push_back(sol.objective_value);
    out.exact_trace.push_back(Evaluate(channel, point.precoder, config).wsr);
    // The optimum of this iteration is strictly feasible for the next one.
    warm = sol.x;
    if (n >= 2 &&
        std::abs(out.trace[n - 1] - out.trace[n - 2]) <= options.epsilon) {
      out.status = ScaStatus::kConverged;
      return out;
    }
  }
  out.status = ScaStatus::kMaxIterations;
  return out;
}

Precoder PerturbedStart(const ChannelMatrix& channel, double power,
                        double lambda, double noise_var, std::mt19937_64& rng) {
  Precoder p = InitPrecoder(channel, power, lambda, noise_var);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const int nt = channel.n_tx();
  for (auto& v : p.priv) {
    const double amp = v.norm();
    Eigen::VectorXcd noise(nt);
    for (int m = 0; m < nt; ++m) noise[m] = Complex(normal(rng), normal(rng));
    Eigen::VectorXcd dir = v / amp + 0.3 * noise / std::sqrt(nt);
    v = amp * dir / dir.norm();
  }
  return p;
}

}  // namespace

ScaResult ScaSolve(const SystemConfig& config, const ChannelMatrix& channel,
                   const ScaOptions& options, Scheme scheme,
                   const Precoder* warm_start) {
  config.Validate();
  options.Validate();
  if (channel.n_users() != config.n_users || channel.n_tx() != config.n_tx) {
    throw std::invalid_argument("channel shape does not match the config");
  }

  constexpr std::array<double, 4> kRestartLambdas{0.1, 0.3, 0.7, 0.9};
  std::mt19937_64 rng(options.seed);
  ScaResult result;
  bool any_infeasible = false;
  for (int attempt = 0; attempt <= options.restarts; ++attempt) {
    Precoder start =
        attempt > 0
            ? PerturbedStart(channel, config.power_budget,
                             kRestartLambdas[(attempt - 1) % kRestartLambdas.size()],
                             config.noise_var, rng)
        : warm_start != nullptr
            ? *warm_start
            : InitPrecoder(channel, config.power_budget,
                           scheme == Scheme::kMulp ? 1.0 : options.lambda_init,
                           config.noise_var);
    Attempt run = RunFrom(config, channel, options, scheme, std::move(start));
    result.attempts = attempt + 1;
    if (!run.point) {
      any_infeasible = any_infeasible || run.status == ScaStatus::kInfeasible;
      continue;
    }
    result.precoder = run.point->precoder;
    result.report = Evaluate(channel, *result.precoder, config);
    result.wsr_trace = std::move(run.trace);
    result.exact_wsr_trace = std::move(run.exact_trace);
    result.initial_wsr = run.initial_wsr;
    result.iterations = run.iterations;
    result.pursuit_iterations = run.pursuit_iterations;
    result.status = run.status;
    return result;
  }
  result.status =
      any_infeasible ? ScaStatus::kInfeasible : ScaStatus::kSolverFailure;
  return result;
}

FeasibilityReport CheckFeasible(const SystemConfig& config,
                                const ChannelMatrix& channel,
                                const Precoder& precoder, double tol) {
  FeasibilityReport rep;
  const RateReport r = Evaluate(channel, precoder, config);
  rep.secrecy_margin = r.secrecy - config.secrecy_thresholds;
  rep.secrecy_ok = (rep.secrecy_margin.array() >= -tol).all();
  rep.common_rate_margin = r.common_rate_cap - precoder.common_alloc.sum();
  rep.common_rate_ok = rep.common_rate_margin >= -tol;
  rep.power = TransmitPower(precoder);
  rep.power_ok = rep.power <= config.power_budget * (1.0 + tol);
  rep.alloc_ok = (precoder.common_alloc.array() >= -tol).all();
  return rep;
}

FeasibilityReport CheckFeasible(const SystemConfig& config,
                                const ChannelMatrix& channel,
                                const ScaResult& result, double tol) {
  if (!result.precoder) {
    FeasibilityReport rep;
    rep.secrecy_margin =
        Eigen::VectorXd::Constant(config.n_users, -config.secrecy_thresholds.maxCoeff());
    return rep;
  }
  return CheckFeasible(config, channel, *result.precoder, tol);
}

}  // namespace rsbeam
