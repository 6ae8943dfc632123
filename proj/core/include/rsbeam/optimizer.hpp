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

#ifndef RSBEAM_OPTIMIZER_HPP_
#define RSBEAM_OPTIMIZER_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "rsbeam/coneprog.hpp"
#include "rsbeam/model.hpp"

namespace rsbeam {

// kRs optimizes a common stream plus K private streams; kMulp is the same
// problem with the common stream removed.
enum class Scheme { kRs, kMulp };

std::string_view ToString(Scheme scheme);
// Inverse of ToString; nullopt for unknown names.
std::optional<Scheme> ParseScheme(std::string_view name);

struct ScaOptions {
  // Stop once two consecutive subproblem objectives differ by at most this.
  double epsilon = 1e-4;
  int max_sca_iterations = 200;
  // Fraction of the power budget given to the private streams at start.
  double lambda_init = 0.5;
  cone::SolverOptions solver;
  // Extra randomized initializations tried when the first subproblem fails.
  int restarts = 4;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Linearization point of the convex subproblem. Indexing of the K x K
// matrices follows (stream owner k, eavesdropper j); diagonals are unused.
struct AuxiliaryState {
  Precoder precoder;
  Eigen::VectorXd alpha_c;  // common-stream rate surrogates
  Eigen::VectorXd alpha_p;  // private-stream rate surrogates
  Eigen::MatrixXd alpha_x;  // wiretap-rate surrogates
  Eigen::VectorXd beta_c;   // interference-plus-noise bounds
  Eigen::VectorXd beta_p;
  Eigen::VectorXd rho_c;  // SINR surrogates
  Eigen::VectorXd rho_p;
  Eigen::MatrixXd rho_x;
};

// Positions of the decision variables in the flat cone-program vector.
// Precoder stream s (0 = common, 1 + k = private of user k) occupies 2 N_t
// consecutive reals: real parts then imaginary parts. Absent variables
// report index -1.
class VariableMap {
 public:
  VariableMap(int n_tx, int n_users, Scheme scheme,
              std::vector<bool> wiretap_active, bool secrecy_slack = false);

  int n_vars() const { return n_vars_; }
  int n_tx() const { return n_tx_; }
  int n_users() const { return n_users_; }
  Scheme scheme() const { return scheme_; }
  bool has_common() const { return scheme_ == Scheme::kRs; }
  // True when user k's secrecy constraint (and its wiretap variables) is
  // part of the program.
  bool wiretap_active(int k) const { return wiretap_active_[k]; }

  int alloc(int k) const { return has_common() ? alloc_ + k : -1; }
  // First index of stream s, or -1 for an absent common stream.
  int stream(int s) const;
  int alpha_c(int k) const { return has_common() ? alpha_c_ + k : -1; }
  int alpha_p(int k) const { return alpha_p_ + k; }
  int alpha_x(int k, int j) const;
  int beta_c(int k) const { return has_common() ? beta_c_ + k : -1; }
  int beta_p(int k) const { return beta_p_ + k; }
  int rho_c(int k) const { return has_common() ? rho_c_ + k : -1; }
  int rho_p(int k) const { return rho_p_ + k; }
  int rho_x(int k, int j) const;
  // Slack of user k's secrecy rows in a feasibility-pursuit program.
  int slack(int k) const;

 private:
  int n_tx_;
  int n_users_;
  Scheme scheme_;
  std::vector<bool> wiretap_active_;
  int alloc_ = 0;
  int precoder_ = 0;
  int alpha_c_ = 0;
  int alpha_p_ = 0;
  int beta_c_ = 0;
  int beta_p_ = 0;
  int rho_c_ = 0;
  int rho_p_ = 0;
  // (k, j) -> offset into the wiretap section, -1 when inactive.
  std::vector<int> wiretap_slot_;
  int alpha_x_ = 0;
  int rho_x_ = 0;
  std::vector<int> slack_slot_;
  int n_vars_ = 0;
};

// Feasibility pursuit: when secrecy_penalty > 0, each active user's secrecy
// rows become alpha_p - alpha_x + s_k >= threshold + secrecy_margin with
// s_k >= 0, and the objective is charged secrecy_penalty * s_k.
struct SubproblemOptions {
  double secrecy_penalty = 0.0;
  double secrecy_margin = 0.0;
};

struct Subproblem {
  cone::ConeProgram program;
  VariableMap map;
};

enum class ScaStatus { kConverged, kMaxIterations, kInfeasible, kSolverFailure };

std::string_view ToString(ScaStatus status);
std::optional<ScaStatus> ParseScaStatus(std::string_view name);

struct ScaResult {
  // Absent when no attempt produced a feasible iterate.
  std::optional<Precoder> precoder;
  // Exact re-evaluation of *precoder.
  RateReport report;
  // Subproblem optimum at every solved iteration (the stopping-rule value).
  std::vector<double> wsr_trace;
  // Exact WSR of the iterate produced at every solved iteration.
  std::vector<double> exact_wsr_trace;
  // Exact WSR of the initialization that produced the returned iterates.
  double initial_wsr = 0.0;
  int iterations = 0;
  // Subproblems solved in feasibility pursuit before the iterations above.
  int pursuit_iterations = 0;
  // Initializations tried, including the first one.
  int attempts = 0;
  ScaStatus status = ScaStatus::kInfeasible;

  bool has_solution() const { return precoder.has_value(); }
  double wsr() const { return report.wsr; }
};

struct FeasibilityReport {
  bool secrecy_ok = false;
  bool common_rate_ok = false;
  bool power_ok = false;
  bool alloc_ok = false;
  // secrecy - threshold per user.
  Eigen::VectorXd secrecy_margin;
  // min_k R_{c,k} - sum_k C_k.
  double common_rate_margin = 0.0;
  double power = 0.0;

  bool ok() const { return secrecy_ok && common_rate_ok && power_ok && alloc_ok; }
};

// Matched-filter private precoders with power lambda * P / K each, and the
// dominant left singular vector of H carrying (1 - lambda) * P for the
// common stream. The common rate min_k R_{c,k} is split evenly.
Precoder InitPrecoder(const ChannelMatrix& channel, double power_budget,
                      double lambda, double noise_var = 1.0);

// Tight linearization point for a precoder: every auxiliary variable equals
// the exact quantity it bounds.
AuxiliaryState InitAux(const ChannelMatrix& channel, const Precoder& precoder,
                       double noise_var);

// Convex restriction of the secrecy-constrained WSR problem around `point`.
// Users with a zero secrecy threshold get no wiretap variables: their
// secrecy constraint is vacuous.
Subproblem BuildSubproblem(const SystemConfig& config,
                           const ChannelMatrix& channel,
                           const AuxiliaryState& point, Scheme scheme,
                           const SubproblemOptions& sub_options = {});

Eigen::VectorXd PackPoint(const VariableMap& map, const AuxiliaryState& point);

// Reads the iterate back; quantities that are not variables of the map are
// recomputed exactly from the precoder.
AuxiliaryState UnpackPoint(const VariableMap& map, const Eigen::VectorXd& x,
                           const ChannelMatrix& channel, double noise_var);

// Successive convex approximation. `warm_start`, when given, replaces the
// matched-filter initialization of the first attempt. When the first
// subproblem of an attempt is infeasible, a feasibility pursuit (penalized
// secrecy slack) runs from the same start until the slack vanishes; only
// then do the recorded iterations begin.
ScaResult ScaSolve(const SystemConfig& config, const ChannelMatrix& channel,
                   const ScaOptions& options, Scheme scheme,
                   const Precoder* warm_start = nullptr);

// Exact post-hoc check of secrecy, common-rate decodability, power and
// allocation sign. A result without a precoder fails every check.
FeasibilityReport CheckFeasible(const SystemConfig& config,
                                const ChannelMatrix& channel,
                                const Precoder& precoder, double tol);
FeasibilityReport CheckFeasible(const SystemConfig& config,
                                const ChannelMatrix& channel,
                                const ScaResult& result, double tol);

}  // namespace rsbeam

#endif  // RSBEAM_OPTIMIZER_HPP_
