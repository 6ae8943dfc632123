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

#ifndef RSBEAM_CONEPROG_HPP_
#define RSBEAM_CONEPROG_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace rsbeam::cone {

// Cones in residual form: a block (A, b, cone) requires A x + b in the cone.
//   kZero                  A x + b = 0
//   kNonnegative           A x + b >= 0 elementwise
//   kSecondOrder           (t, v):    ||v||_2 <= t, at least 2 rows
//   kRotatedSecondOrder    (u, w, v): ||v||^2 <= 2 u w, u, w >= 0, >= 3 rows
//   kExponential           (x, y, z): y exp(x / y) <= z, y > 0 (closure),
//                          exactly 3 rows
enum class ConeKind {
  kZero,
  kNonnegative,
  kSecondOrder,
  kRotatedSecondOrder,
  kExponential,
};

std::string_view ToString(ConeKind cone);

struct Block {
  ConeKind cone;
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  std::string label;
};

// maximize objective' x subject to every block.
class ConeProgram {
 public:
  explicit ConeProgram(int n_vars);

  int n_vars() const { return n_vars_; }
  const Eigen::VectorXd& objective() const { return objective_; }
  void set_objective(Eigen::VectorXd objective);
  void set_objective_coeff(int var, double value);

  // Appends a block; throws std::invalid_argument on a column-count mismatch
  // or a row count the cone does not admit.
  ConeProgram& add_block(Eigen::MatrixXd a, Eigen::VectorXd b, ConeKind cone,
                         std::string label = {});

  const std::vector<Block>& blocks() const { return blocks_; }
  int total_rows() const;

  // Plain-text dump, one record per block:
  //   block <index> <cone> <rows> [label]
  //   <rows lines of: a_0 ... a_{n-1} | b>
  // preceded by a header "cone_program <n_vars>" and an objective line.
  void WriteText(std::ostream& out) const;

 private:
  int n_vars_;
  Eigen::VectorXd objective_;
  std::vector<Block> blocks_;
};

enum class SolveStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kMaxIterations,
  kNumericalFailure,
};

std::string_view ToString(SolveStatus status);

struct SolverOptions {
  double feasibility_tol = 1e-8;
  double relative_gap_tol = 1e-8;
  // Cap on Newton steps across both phases.
  int max_iterations = 500;
  // Radius of the implicit ball ||x|| <= bound_radius that keeps every
  // centering problem bounded; iterates reaching half of it are reported
  // as unbounded.
  double bound_radius = 1e7;
  // Barrier parameter growth between centering steps.
  double barrier_growth = 12.0;
};

struct ConicSolution {
  Eigen::VectorXd x;
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective_value = 0.0;
  int iterations = 0;
  // Bound on the suboptimality of x when status is kOptimal.
  double gap = 0.0;
};

// Primal barrier interior-point method. A strictly feasible warm start skips
// the phase-one search; any other warm start is ignored. Never throws for a
// well-formed program; throws std::invalid_argument for a malformed one.
ConicSolution Solve(const ConeProgram& program,
                    const SolverOptions& options = {},
                    const std::optional<Eigen::VectorXd>& warm_start = {});

struct BlockResidual {
  int index;
  ConeKind cone;
  std::string label;
  double residual;
  bool violated;
};

struct VerifyReport {
  std::vector<BlockResidual> blocks;

  bool feasible() const;
  double max_residual() const;
};

// Euclidean distance from A x + b to each block's cone. Independent of the
// solver: uses only cone projections.
VerifyReport Verify(const ConeProgram& program, const Eigen::VectorXd& x,
                    double tol);

// Euclidean distance from a point to the cone (upper estimate for the
// exponential cone, tight to about 1e-10).
double DistanceToCone(ConeKind cone, const Eigen::Ref<const Eigen::VectorXd>& s);

// Strict interior test used by the barrier.
bool InInterior(ConeKind cone, const Eigen::Ref<const Eigen::VectorXd>& s);

}  // namespace rsbeam::cone

#endif  // RSBEAM_CONEPROG_HPP_
