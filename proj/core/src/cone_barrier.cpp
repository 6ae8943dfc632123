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

// Primal log-barrier interior-point method for the cones of coneprog.hpp.
//
// Equality blocks are eliminated through a null-space parameterization
// x = x_p + Z z. The remaining blocks define a self-concordant barrier
// phi(z); a large ball ||z|| < R is added so that every centering problem
// has a minimizer. Centering uses damped Newton steps 1 / (1 + lambda),
// which keep the iterate in the domain without a function-value line search.
// A phase-one problem in (z, s) with blocks A z + b + s e in K finds a
// strictly feasible start when none is supplied.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rsbeam/coneprog.hpp"

namespace rsbeam::cone {
namespace {

struct SparseBlock {
  ConeKind cone;
  std::vector<int> support;
  Eigen::MatrixXd a;  // rows x support.size()
  Eigen::VectorXd b;
};

double BarrierParameter(ConeKind cone, Eigen::Index rows) {
  switch (cone) {
    case ConeKind::kNonnegative:
      return static_cast<double>(rows);
    case ConeKind::kSecondOrder:
    case ConeKind::kRotatedSecondOrder:
      return 2.0;
    case ConeKind::kExponential:
      return 3.0;
    case ConeKind::kZero:
      break;
  }
  return 0.0;
}

// Gradient and Hessian of the cone barrier at slack s (s must be interior).
void SlackDerivatives(ConeKind cone, const Eigen::VectorXd& s,
                      Eigen::VectorXd& g, Eigen::MatrixXd& h) {
  const Eigen::Index r = s.size();
  switch (cone) {
    case ConeKind::kNonnegative: {
      g = -s.cwiseInverse();
      h = s.cwiseAbs2().cwiseInverse().asDiagonal();
      return;
    }
    case ConeKind::kSecondOrder: {
      Eigen::VectorXd js = -s;
      js[0] = s[0];
      const double d = s[0] * s[0] - s.tail(r - 1).squaredNorm();
      g = (-2.0 / d) * js;
      h = (4.0 / (d * d)) * js * js.transpose();
      h.diagonal().array() += 2.0 / d;
      h(0, 0) -= 4.0 / d;
      return;
    }
    case ConeKind::kRotatedSecondOrder: {
      Eigen::VectorXd qs = -s;
      qs[0] = s[1];
      qs[1] = s[0];
      const double d = 2.0 * s[0] * s[1] - s.tail(r - 2).squaredNorm();
      g = (-2.0 / d) * qs;
      h = (4.0 / (d * d)) * qs * qs.transpose();
      // -2 Q / d with Q = [[0, 1], [1, 0]] (+) -I.
      for (Eigen::Index i = 2; i < r; ++i) h(i, i) += 2.0 / d;
      h(0, 1) -= 2.0 / d;
      h(1, 0) -= 2.0 / d;
      return;
    }
    case ConeKind::kExponential: {
      const double x = s[0];
      const double y = s[1];
      const double z = s[2];
      const double lg = std::log(z / y);
      const double psi = y * lg - x;
      const Eigen::Vector3d dpsi(-1.0, lg - 1.0, y / z);
      Eigen::Matrix3d hpsi = Eigen::Matrix3d::Zero();
      hpsi(1, 1) = -1.0 / y;
      hpsi(1, 2) = hpsi(2, 1) = 1.0 / z;
      hpsi(2, 2) = -y / (z * z);
      g = -dpsi / psi;
      g[1] -= 1.0 / y;
      g[2] -= 1.0 / z;
      h = dpsi * dpsi.transpose() / (psi * psi) - hpsi / psi;
      h(1, 1) += 1.0 / (y * y);
      h(2, 2) += 1.0 / (z * z);
      return;
    }
    case ConeKind::kZero:
      break;
  }
  throw std::logic_error("zero cone has no barrier");
}

// F(s1) - F(s0) for the cone barrier.
double LogDetRatio(ConeKind cone, const Eigen::VectorXd& s0,
                   const Eigen::VectorXd& s1) {
  const Eigen::Index r = s0.size();
  switch (cone) {
    case ConeKind::kNonnegative:
      return -(s1.array() / s0.array()).log().sum();
    case ConeKind::kSecondOrder: {
      const double d0 = s0[0] * s0[0] - s0.tail(r - 1).squaredNorm();
      const double d1 = s1[0] * s1[0] - s1.tail(r - 1).squaredNorm();
      return -std::log(d1 / d0);
    }
    case ConeKind::kRotatedSecondOrder: {
      const double d0 = 2.0 * s0[0] * s0[1] - s0.tail(r - 2).squaredNorm();
      const double d1 = 2.0 * s1[0] * s1[1] - s1.tail(r - 2).squaredNorm();
      return -std::log(d1 / d0);
    }
    case ConeKind::kExponential: {
      const double p0 = s0[1] * std::log(s0[2] / s0[1]) - s0[0];
      const double p1 = s1[1] * std::log(s1[2] / s1[1]) - s1[0];
      return -std::log(p1 / p0) - std::log(s1[1] / s0[1]) -
             std::log(s1[2] / s0[2]);
    }
    case ConeKind::kZero:
      break;
  }
  return 0.0;
}

class Barrier {
 public:
  Barrier(int n, std::vector<SparseBlock> blocks, double radius)
      : n_(n), blocks_(std::move(blocks)), radius_sq_(radius * radius) {
    nu_ = 1.0;  // ball
    for (const auto& blk : blocks_) nu_ += BarrierParameter(blk.cone, blk.a.rows());
  }

  int n() const { return n_; }
  double nu() const { return nu_; }

  Eigen::VectorXd Slack(const SparseBlock& blk, const Eigen::VectorXd& z) const {
    Eigen::VectorXd s = blk.b;
    for (std::size_t j = 0; j < blk.support.size(); ++j) {
      s += blk.a.col(static_cast<Eigen::Index>(j)) * z[blk.support[j]];
    }
    return s;
  }

  bool Interior(const Eigen::VectorXd& z) const {
    if (!z.allFinite() || !(z.squaredNorm() < radius_sq_)) return false;
    for (const auto& blk : blocks_) {
      if (!InInterior(blk.cone, Slack(blk, z))) return false;
    }
    return true;
  }

  // phi(z1) - phi(z0) for interior z0, z1, evaluated as sums of log ratios
  // so that tiny differences survive rounding.
  double Difference(const Eigen::VectorXd& z0, const Eigen::VectorXd& z1) const {
    double diff = -std::log((radius_sq_ - z1.squaredNorm()) /
                            (radius_sq_ - z0.squaredNorm()));
    for (const auto& blk : blocks_) {
      diff += LogDetRatio(blk.cone, Slack(blk, z0), Slack(blk, z1));
    }
    return diff;
  }

  void Derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& grad,
                   Eigen::MatrixXd& hess) const {
    const double q = radius_sq_ - z.squaredNorm();
    grad = (2.0 / q) * z;
    hess = (4.0 / (q * q)) * z * z.transpose();
    hess.diagonal().array() += 2.0 / q;
    Eigen::VectorXd gs;
    Eigen::MatrixXd hs;
    for (const auto& blk : blocks_) {
      SlackDerivatives(blk.cone, Slack(blk, z), gs, hs);
      const Eigen::VectorXd gz = blk.a.transpose() * gs;
      const Eigen::MatrixXd hz = blk.a.transpose() * hs * blk.a;
      const auto m = blk.support.size();
      for (std::size_t i = 0; i < m; ++i) {
        const int gi = blk.support[i];
        grad[gi] += gz[static_cast<Eigen::Index>(i)];
        for (std::size_t j = 0; j < m; ++j) {
          hess(gi, blk.support[j]) +=
              hz(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
      }
    }
  }

 private:
  int n_;
  std::vector<SparseBlock> blocks_;
  double radius_sq_;
  double nu_ = 0.0;
};

// A stalled path is accepted when its last centered point is within this
// factor of the requested gap.
constexpr double kStalledGapFactor = 1e3;

enum class CenterOutcome { kConverged, kStalled, kBudget, kEarlyStop };

bool NewtonDirection(const Eigen::MatrixXd& hess, const Eigen::VectorXd& grad,
                     Eigen::VectorXd& dz) {
  Eigen::LLT<Eigen::MatrixXd> llt(hess);
  if (llt.info() == Eigen::Success) {
    dz = -llt.solve(grad);
    if (dz.allFinite()) return true;
  }
  const double scale = std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
  for (double reg = 1e-14; reg < 1e-4; reg *= 100.0) {
    Eigen::MatrixXd shifted = hess;
    shifted.diagonal().array() += reg * scale;
    llt.compute(shifted);
    if (llt.info() == Eigen::Success) {
      dz = -llt.solve(grad);
      if (dz.allFinite()) return true;
    }
  }
  return false;
}

// Minimizes t * cost' z + phi(z) from the interior point z.
CenterOutcome Center(const Barrier& barrier, const Eigen::VectorXd& cost,
                     double t, Eigen::VectorXd& z, int& budget,
                     const std::function<bool(const Eigen::VectorXd&)>& stop) {
  constexpr int kMaxInner = 100;
  // A point this close to the central path costs at most a few percent of
  // nu / t in suboptimality; accept it when rounding blocks further progress.
  constexpr double kRoundingDecrement = 1e-3;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  Eigen::VectorXd dz;
  double last_decrement = std::numeric_limits<double>::infinity();
  for (int inner = 0; inner < kMaxInner; ++inner) {
    if (budget <= 0) return CenterOutcome::kBudget;
    barrier.Derivatives(z, grad, hess);
    grad += t * cost;
    if (!NewtonDirection(hess, grad, dz)) return CenterOutcome::kStalled;
    const double decrement_sq = -grad.dot(dz);
    if (!std::isfinite(decrement_sq)) return CenterOutcome::kStalled;
    last_decrement = decrement_sq;
    if (decrement_sq < 1e-9) return CenterOutcome::kConverged;
    // Backtracking on the exact change of t cost' z + phi(z); extrapolate
    // past the unit step while it keeps paying off, which matters when the
    // start hugs the boundary.
    const double slope = -decrement_sq;
    auto change = [&](double a, const Eigen::VectorXd& zt) {
      return t * a * cost.dot(dz) + barrier.Difference(z, zt);
    };
    double step = 1.0;
    Eigen::VectorXd trial = z + dz;
    double delta = 0.0;
    for (;;) {
      if (barrier.Interior(trial)) {
        delta = change(step, trial);
        if (delta <= 0.01 * step * slope) break;
      }
      step *= 0.5;
      if (step < 1e-16) {
        return decrement_sq < kRoundingDecrement ? CenterOutcome::kConverged
                                   : CenterOutcome::kStalled;
      }
      trial = z + step * dz;
    }
    if (step == 1.0) {
      for (int grow = 0; grow < 30; ++grow) {
        const Eigen::VectorXd further = z + (2.0 * step) * dz;
        if (!barrier.Interior(further)) break;
        const double d = change(2.0 * step, further);
        if (!(d < delta)) break;
        step *= 2.0;
        delta = d;
        trial = further;
      }
    }
    z = std::move(trial);
    --budget;
    if (stop && stop(z)) return CenterOutcome::kEarlyStop;
  }
  // Rounding limits the attainable decrement once t is large.
  return last_decrement < kRoundingDecrement ? CenterOutcome::kConverged
                               : CenterOutcome::kStalled;
}

// Barrier weight that best balances cost and barrier gradient at z.
double InitialWeight(const Barrier& barrier, const Eigen::VectorXd& cost,
                     const Eigen::VectorXd& z) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  barrier.Derivatives(z, grad, hess);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
  const Eigen::VectorXd hc = ldlt.solve(cost);
  const double denom = cost.dot(hc);
  double t = denom > 0.0 ? -grad.dot(hc) / denom : 1.0;
  if (!std::isfinite(t)) t = 1.0;
  return std::clamp(t, 1e-3, 1e3);
}

struct Reduced {
  int n = 0;
  Eigen::VectorXd objective;  // maximize
  std::vector<SparseBlock> blocks;
  Eigen::VectorXd x_particular;
  Eigen::MatrixXd null_basis;  // empty when there are no equalities
  bool has_equalities = false;

  Eigen::VectorXd Lift(const Eigen::VectorXd& z) const {
    return has_equalities ? Eigen::VectorXd(x_particular + null_basis * z) : z;
  }
  Eigen::VectorXd Project(const Eigen::VectorXd& x) const {
    return has_equalities
               ? Eigen::VectorXd(null_basis.transpose() * (x - x_particular))
               : x;
  }
};

SparseBlock Compress(ConeKind cone, const Eigen::MatrixXd& a,
                     const Eigen::VectorXd& b) {
  SparseBlock blk{cone, {}, {}, b};
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    if (a.col(j).cwiseAbs().maxCoeff() > 0.0) {
      blk.support.push_back(static_cast<int>(j));
    }
  }
  blk.a.resize(a.rows(), static_cast<Eigen::Index>(blk.support.size()));
  for (std::size_t j = 0; j < blk.support.size(); ++j) {
    blk.a.col(static_cast<Eigen::Index>(j)) = a.col(blk.support[j]);
  }
  return blk;
}

// Returns false when the equality system is inconsistent.
bool Reduce(const ConeProgram& program, double feas_tol, Reduced& out) {
  const int n = program.n_vars();
  Eigen::MatrixXd eq_a(0, n);
  Eigen::VectorXd eq_b(0);
  for (const auto& blk : program.blocks()) {
    if (blk.cone != ConeKind::kZero) continue;
    const auto rows = eq_a.rows();
    eq_a.conservativeResize(rows + blk.a.rows(), Eigen::NoChange);
    eq_b.conservativeResize(rows + blk.a.rows());
    eq_a.bottomRows(blk.a.rows()) = blk.a;
    eq_b.tail(blk.a.rows()) = blk.b;
  }
  out.has_equalities = eq_a.rows() > 0;
  if (!out.has_equalities) {
    out.n = n;
    out.objective = program.objective();
    for (const auto& blk : program.blocks()) {
      out.blocks.push_back(Compress(blk.cone, blk.a, blk.b));
    }
    return true;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(eq_a,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff =
      (sv.size() > 0 ? sv[0] : 0.0) * 1e-12 * std::max<Eigen::Index>(eq_a.rows(), n);
  svd.setThreshold(sv.size() > 0 && sv[0] > 0.0 ? cutoff / sv[0] : 1e-12);
  const auto rank = svd.rank();
  out.x_particular = svd.solve(-eq_b);
  const double residual = (eq_a * out.x_particular + eq_b).norm();
  if (residual > feas_tol * (1.0 + eq_b.norm())) return false;
  out.null_basis = svd.matrixV().rightCols(n - rank);
  out.n = static_cast<int>(n - rank);
  out.objective = out.null_basis.transpose() * program.objective();
  for (const auto& blk : program.blocks()) {
    if (blk.cone == ConeKind::kZero) continue;
    out.blocks.push_back(Compress(blk.cone, blk.a * out.null_basis,
                                  blk.b + blk.a * out.x_particular));
  }
  return true;
}

// Interior direction used to shift each cone in phase one.
Eigen::VectorXd InteriorDirection(ConeKind cone, Eigen::Index rows) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(rows);
  switch (cone) {
    case ConeKind::kNonnegative:
      e.setOnes();
      break;
    case ConeKind::kSecondOrder:
      e[0] = 1.0;
      break;
    case ConeKind::kRotatedSecondOrder:
      e[0] = 1.0;
      e[1] = 1.0;
      break;
    case ConeKind::kExponential:
      e << -1.0, 1.0, 1.0;
      break;
    case ConeKind::kZero:
      break;
  }
  return e;
}

struct PhaseOneResult {
  SolveStatus status;
  Eigen::VectorXd z;
};

PhaseOneResult PhaseOne(const Reduced& red, const SolverOptions& options,
                        const Eigen::VectorXd& z0, int& budget) {
  const int n = red.n;
  std::vector<SparseBlock> blocks;
  blocks.reserve(red.blocks.size());
  for (const auto& blk : red.blocks) {
    SparseBlock ext = blk;
    ext.support.push_back(n);
    ext.a.conservativeResize(Eigen::NoChange, ext.a.cols() + 1);
    ext.a.col(ext.a.cols() - 1) = InteriorDirection(blk.cone, blk.a.rows());
    blocks.push_back(std::move(ext));
  }

  Eigen::VectorXd w(n + 1);
  w.head(n) = z0;
  double shift = 1.0;
  const Barrier probe(n + 1, blocks, std::numeric_limits<double>::max());
  for (int i = 0; i < 200; ++i) {
    w[n] = shift;
    if (probe.Interior(w)) break;
    shift *= 2.0;
  }
  w[n] = 2.0 * shift;
  const double radius = std::max(options.bound_radius, 10.0 * (w.norm() + 1.0));
  const Barrier barrier(n + 1, std::move(blocks), radius);
  if (!barrier.Interior(w)) return {SolveStatus::kNumericalFailure, z0};

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + 1);
  cost[n] = 1.0;
  const double margin = std::min(1.0, 1e-3 * (1.0 + std::abs(w[n])));
  auto deep_enough = [&](const Eigen::VectorXd& v) { return v[n] < -margin; };

  double t = InitialWeight(barrier, cost, w);
  for (int outer = 0; outer < 200; ++outer) {
    const CenterOutcome outcome = Center(barrier, cost, t, w, budget, deep_enough);
    if (w[n] < 0.0) return {SolveStatus::kOptimal, w.head(n)};
    if (outcome == CenterOutcome::kBudget) return {SolveStatus::kMaxIterations, w.head(n)};
    const double gap = barrier.nu() / t;
    if (w[n] - gap > options.feasibility_tol) {
      return {SolveStatus::kInfeasible, w.head(n)};
    }
    if (outcome == CenterOutcome::kStalled || gap < 1e-13) {
      // Feasible set has (numerically) empty interior.
      return {w[n] > options.feasibility_tol ? SolveStatus::kInfeasible
                                             : SolveStatus::kNumericalFailure,
              w.head(n)};
    }
    t *= options.barrier_growth;
  }
  return {SolveStatus::kNumericalFailure, w.head(n)};
}

void Validate(const ConeProgram& program, const SolverOptions& options) {
  if (!(options.feasibility_tol > 0.0) || !(options.relative_gap_tol > 0.0) ||
      options.max_iterations < 1 || !(options.bound_radius > 0.0) ||
      !(options.barrier_growth > 1.0)) {
    throw std::invalid_argument("solver options must be positive");
  }
  if (program.objective().size() != program.n_vars() ||
      !program.objective().allFinite()) {
    throw std::invalid_argument("objective must be finite with n_vars entries");
  }
}

}  // namespace

ConicSolution Solve(const ConeProgram& program, const SolverOptions& options,
                    const std::optional<Eigen::VectorXd>& warm_start) {
  Validate(program, options);
  ConicSolution sol;
  sol.x = Eigen::VectorXd::Zero(program.n_vars());

  Reduced red;
  if (!Reduce(program, options.feasibility_tol, red)) {
    sol.status = SolveStatus::kInfeasible;
    return sol;
  }

  auto finish = [&](const Eigen::VectorXd& z, SolveStatus status, double gap) {
    sol.x = red.Lift(z);
    sol.objective_value = program.objective().dot(sol.x);
    sol.gap = gap;
    sol.status = status;
    if (status == SolveStatus::kOptimal &&
        !Verify(program, sol.x, options.feasibility_tol).feasible()) {
      sol.status = SolveStatus::kNumericalFailure;
    }
    return sol;
  };

  if (red.n == 0) {
    const bool ok = Verify(program, red.x_particular, options.feasibility_tol).feasible();
    return finish(Eigen::VectorXd::Zero(0),
                  ok ? SolveStatus::kOptimal : SolveStatus::kInfeasible, 0.0);
  }

  int budget = options.max_iterations;
  Eigen::VectorXd z = Eigen::VectorXd::Zero(red.n);
  bool have_start = false;
  if (warm_start && warm_start->size() == program.n_vars()) {
    z = red.Project(*warm_start);
    const Barrier check(red.n, red.blocks, std::numeric_limits<double>::max());
    have_start = check.Interior(z);
  }
  if (!have_start) {
    const Barrier check(red.n, red.blocks, std::numeric_limits<double>::max());
    if (!check.Interior(z)) {
      PhaseOneResult p1 = PhaseOne(red, options, z, budget);
      if (p1.status != SolveStatus::kOptimal) {
        sol.iterations = options.max_iterations - budget;
        return finish(p1.z, p1.status, std::numeric_limits<double>::infinity());
      }
      z = std::move(p1.z);
    }
  }

  const double radius = std::max(options.bound_radius, 10.0 * (z.norm() + 1.0));
  const Barrier barrier(red.n, red.blocks, radius);
  const Eigen::VectorXd cost = -red.objective;
  if (cost.cwiseAbs().maxCoeff() == 0.0) {
    sol.iterations = options.max_iterations - budget;
    return finish(z, SolveStatus::kOptimal, 0.0);
  }

  // A warm start usually sits close to the boundary near the optimum; start
  // the path at a moderate gap instead of balancing gradients there.
  double t = have_start
                 ? barrier.nu() / std::max(1.0, std::abs(cost.dot(z)))
                 : InitialWeight(barrier, cost, z);
  SolveStatus status = SolveStatus::kNumericalFailure;
  double gap = std::numeric_limits<double>::infinity();
  // Last point that reached the central path, kept in case a later
  // centering stalls on badly scaled data.
  Eigen::VectorXd z_centered;
  double gap_centered = std::numeric_limits<double>::infinity();
  auto fall_back = [&](double scale) {
    if (gap_centered > kStalledGapFactor * options.relative_gap_tol * scale) {
      return false;
    }
    z = z_centered;
    gap = gap_centered;
    status = SolveStatus::kOptimal;
    return true;
  };
  for (;;) {
    const CenterOutcome outcome = Center(barrier, cost, t, z, budget, {});
    gap = barrier.nu() / t;
    if (z.norm() > 0.5 * radius) {
      status = SolveStatus::kUnbounded;
      break;
    }
    if (outcome == CenterOutcome::kBudget) {
      status = SolveStatus::kMaxIterations;
      break;
    }
    const double scale = std::max(1.0, std::abs(red.objective.dot(z)));
    if (outcome == CenterOutcome::kStalled) {
      if (!fall_back(scale)) status = SolveStatus::kNumericalFailure;
      break;
    }
    if (gap <= options.relative_gap_tol * scale) {
      status = SolveStatus::kOptimal;
      break;
    }
    z_centered = z;
    gap_centered = gap;
    t *= options.barrier_growth;
  }
  sol.iterations = options.max_iterations - budget;
  return finish(z, status, gap);
}

}  // namespace rsbeam::cone
