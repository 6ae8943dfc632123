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

#include "rsbeam/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace rsbeam {
namespace {

void CheckShapes(const ChannelMatrix& channel, const Precoder& precoder) {
  if (precoder.n_tx() != channel.n_tx() ||
      precoder.n_users() != channel.n_users() ||
      precoder.common_alloc.size() != channel.n_users()) {
    throw std::invalid_argument("precoder shape does not match the channel");
  }
  for (const auto& p : precoder.priv) {
    if (p.size() != channel.n_tx()) {
      throw std::invalid_argument("private precoder has wrong length");
    }
  }
}

// |h_k^H p|^2 for every stream and user: gains(s, k) with s = 0 the common
// stream and s = 1 + j the private stream of user j.
Eigen::MatrixXd StreamGains(const ChannelMatrix& channel,
                            const Precoder& precoder) {
  const int users = channel.n_users();
  Eigen::MatrixXd gains(users + 1, users);
  for (int k = 0; k < users; ++k) {
    const Eigen::VectorXcd h = channel.user(k);
    gains(0, k) = std::norm(h.dot(precoder.common));
    for (int j = 0; j < users; ++j) {
      gains(1 + j, k) = std::norm(h.dot(precoder.priv[j]));
    }
  }
  return gains;
}

}  // namespace

SystemConfig SystemConfig::Symmetric(int n_tx, int n_users,
                                     double power_budget, double noise_var,
                                     double threshold) {
  SystemConfig config;
  config.n_tx = n_tx;
  config.n_users = n_users;
  config.power_budget = power_budget;
  config.noise_var = noise_var;
  config.weights = Eigen::VectorXd::Constant(n_users, 1.0 / n_users);
  config.secrecy_thresholds = Eigen::VectorXd::Constant(n_users, threshold);
  return config;
}

void SystemConfig::Validate() const {
  if (n_tx < 1 || n_users < 1) {
    throw std::invalid_argument("n_tx and n_users must be positive");
  }
  if (!(power_budget > 0.0) || !(noise_var > 0.0)) {
    throw std::invalid_argument("power_budget and noise_var must be positive");
  }
  if (weights.size() != n_users || secrecy_thresholds.size() != n_users) {
    throw std::invalid_argument(
        "weights and secrecy_thresholds need one entry per user");
  }
  if ((weights.array() < 0.0).any() || !(weights.array() > 0.0).any()) {
    throw std::invalid_argument(
        "weights must be nonnegative with at least one positive entry");
  }
  if ((secrecy_thresholds.array() < 0.0).any() ||
      !secrecy_thresholds.allFinite()) {
    throw std::invalid_argument("secrecy thresholds must be nonnegative");
  }
}

ChannelMatrix::ChannelMatrix(Eigen::MatrixXcd entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.cols() < 1) {
    throw std::invalid_argument("channel matrix must be non-empty");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("channel matrix has non-finite entries");
  }
  for (Eigen::Index k = 0; k < entries_.cols(); ++k) {
    if (entries_.col(k).squaredNorm() == 0.0) {
      throw std::invalid_argument("channel of user " + std::to_string(k) +
                                  " is identically zero");
    }
  }
}

Precoder Precoder::Zero(int n_tx, int n_users) {
  Precoder p;
  p.common = Eigen::VectorXcd::Zero(n_tx);
  p.priv.assign(n_users, Eigen::VectorXcd::Zero(n_tx));
  p.common_alloc = Eigen::VectorXd::Zero(n_users);
  return p;
}

ChannelMatrix SpecificChannels(int n_tx, double theta, double gamma) {
  if (n_tx < 1) throw std::invalid_argument("n_tx must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  Eigen::MatrixXcd h(n_tx, 2);
  for (int m = 0; m < n_tx; ++m) {
    h(m, 0) = 1.0;
    h(m, 1) = gamma * std::polar(1.0, m * theta);
  }
  return ChannelMatrix(std::move(h));
}

ChannelMatrix RandomChannels(int n_users, int n_tx, std::uint64_t seed) {
  if (n_users < 1 || n_tx < 1) {
    throw std::invalid_argument("channel dimensions must be positive");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd h(n_tx, n_users);
  for (int k = 0; k < n_users; ++k) {
    for (int m = 0; m < n_tx; ++m) {
      const double re = normal(rng);
      const double im = normal(rng);
      h(m, k) = Complex(re, im);
    }
  }
  return ChannelMatrix(std::move(h));
}

SinrTable ComputeSinrs(const ChannelMatrix& channel, const Precoder& precoder,
                       double noise_var) {
  if (!(noise_var > 0.0)) {
    throw std::invalid_argument("noise variance must be positive");
  }
  CheckShapes(channel, precoder);
  const int users = channel.n_users();
  const Eigen::MatrixXd gains = StreamGains(channel, precoder);

  SinrTable table;
  table.common.resize(users);
  table.priv.resize(users);
  table.wiretap = Eigen::MatrixXd::Zero(users, users);
  for (int k = 0; k < users; ++k) {
    double all_private = 0.0;
    double others = 0.0;
    for (int i = 0; i < users; ++i) {
      all_private += gains(1 + i, k);
      if (i != k) others += gains(1 + i, k);
    }
    table.common[k] = gains(0, k) / (all_private + noise_var);
    table.priv[k] = gains(1 + k, k) / (others + noise_var);
    for (int j = 0; j < users; ++j) {
      if (j == k) continue;
      double rest = 0.0;
      for (int i = 0; i < users; ++i) {
        if (i != j && i != k) rest += gains(1 + i, k);
      }
      table.wiretap(j, k) = gains(1 + j, k) / (rest + noise_var);
    }
  }
  return table;
}

RateReport Evaluate(const ChannelMatrix& channel, const Precoder& precoder,
                    const SystemConfig& config, double tolerance) {
  if (config.n_tx != channel.n_tx() || config.n_users != channel.n_users()) {
    throw std::invalid_argument("config does not match the channel shape");
  }
  if (config.weights.size() != channel.n_users()) {
    throw std::invalid_argument("weights do not match the number of users");
  }
  const SinrTable sinr = ComputeSinrs(channel, precoder, config.noise_var);
  const int users = channel.n_users();
  auto rate = [](double s) { return std::log2(1.0 + s); };

  RateReport r;
  r.rate_common = sinr.common.unaryExpr(rate);
  r.rate_private = sinr.priv.unaryExpr(rate);
  r.rate_wiretap = sinr.wiretap.unaryExpr(rate);
  r.common_rate_cap = r.rate_common.minCoeff();
  r.secrecy.resize(users);
  for (int k = 0; k < users; ++k) {
    double worst = 0.0;
    for (int j = 0; j < users; ++j) {
      if (j != k) worst = std::max(worst, r.rate_wiretap(k, j));
    }
    r.secrecy[k] = std::max(0.0, r.rate_private[k] - worst);
  }
  r.total = precoder.common_alloc + r.rate_private;
  r.wsr = config.weights.dot(r.total);
  r.common_rate_feasible =
      precoder.common_alloc.sum() <= r.common_rate_cap + tolerance;
  return r;
}

double TransmitPower(const Precoder& precoder) {
  double power = precoder.common.squaredNorm();
  for (const auto& p : precoder.priv) power += p.squaredNorm();
  return power;
}

Eigen::VectorXd PowerRatios(const Precoder& precoder, double power_budget) {
  if (!(power_budget > 0.0)) {
    throw std::invalid_argument("power budget must be positive");
  }
  Eigen::VectorXd ratios(precoder.n_users() + 1);
  ratios[0] = precoder.common.squaredNorm();
  for (int k = 0; k < precoder.n_users(); ++k) {
    ratios[1 + k] = precoder.priv[k].squaredNorm();
  }
  return ratios / power_budget;
}

}  // namespace rsbeam
