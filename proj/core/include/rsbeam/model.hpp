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

#ifndef RSBEAM_MODEL_HPP_
#define RSBEAM_MODEL_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace rsbeam {

using Complex = std::complex<double>;

// Parameters of the K-user MISO broadcast channel. All powers are linear.
struct SystemConfig {
  int n_tx = 2;
  int n_users = 2;
  double power_budget = 100.0;
  double noise_var = 1.0;
  Eigen::VectorXd weights;
  // Per-user secrecy rate requirement in bits per channel use.
  Eigen::VectorXd secrecy_thresholds;

  // Equal weights 1/K and a common secrecy threshold for every user.
  static SystemConfig Symmetric(int n_tx, int n_users, double power_budget,
                                double noise_var, double threshold);

  // Throws std::invalid_argument when a field is out of range.
  void Validate() const;
};

// N_t x K complex channel; column k is the channel h_k of user k.
class ChannelMatrix {
 public:
  explicit ChannelMatrix(Eigen::MatrixXcd entries);

  int n_tx() const { return static_cast<int>(entries_.rows()); }
  int n_users() const { return static_cast<int>(entries_.cols()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  auto user(int k) const { return entries_.col(k); }

 private:
  Eigen::MatrixXcd entries_;
};

// Linear precoder [p_c, p_1, ..., p_K] together with the split of the common
// stream rate among the users. A MULP precoder has p_c = 0 and c = 0.
struct Precoder {
  Eigen::VectorXcd common;
  std::vector<Eigen::VectorXcd> priv;
  Eigen::VectorXd common_alloc;

  static Precoder Zero(int n_tx, int n_users);

  int n_tx() const { return static_cast<int>(common.size()); }
  int n_users() const { return static_cast<int>(priv.size()); }
};

struct SinrTable {
  Eigen::VectorXd common;
  Eigen::VectorXd priv;
  // wiretap(j, k): SINR of user j's private stream when decoded at user k,
  // after user k removed the common stream and its own private stream. The
  // diagonal is unused and kept at zero.
  Eigen::MatrixXd wiretap;
};

struct RateReport {
  Eigen::VectorXd rate_common;
  Eigen::VectorXd rate_private;
  // rate_wiretap(j, k): rate at which user k can decode user j's private
  // stream. Same indexing as SinrTable::wiretap.
  Eigen::MatrixXd rate_wiretap;
  double common_rate_cap = 0.0;
  Eigen::VectorXd secrecy;
  Eigen::VectorXd total;
  double wsr = 0.0;
  // False when sum_k C_k exceeds common_rate_cap by more than the tolerance
  // passed to Evaluate.
  bool common_rate_feasible = true;
};

// Two-user line-of-sight channel: h_1 is all ones and h_2 = gamma *
// [1, e^{j theta}, ..., e^{j (n_tx - 1) theta}].
ChannelMatrix SpecificChannels(int n_tx, double theta, double gamma);

// I.i.d. CN(0, 1) entries; identical seeds give identical matrices.
ChannelMatrix RandomChannels(int n_users, int n_tx, std::uint64_t seed);

SinrTable ComputeSinrs(const ChannelMatrix& channel, const Precoder& precoder,
                       double noise_var);

RateReport Evaluate(const ChannelMatrix& channel, const Precoder& precoder,
                    const SystemConfig& config, double tolerance = 1e-6);

// tr(P P^H).
double TransmitPower(const Precoder& precoder);

// [|p_c|^2, |p_1|^2, ..., |p_K|^2] / power_budget.
Eigen::VectorXd PowerRatios(const Precoder& precoder, double power_budget);

}  // namespace rsbeam

#endif  // RSBEAM_MODEL_HPP_
