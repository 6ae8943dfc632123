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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "rsbeam/coneprog.hpp"

namespace rsbeam::cone {

std::string_view ToString(ConeKind cone) {
  switch (cone) {
    case ConeKind::kZero:
      return "zero";
    case ConeKind::kNonnegative:
      return "nonnegative";
    case ConeKind::kSecondOrder:
      return "second_order";
    case ConeKind::kRotatedSecondOrder:
      return "rotated_second_order";
    case ConeKind::kExponential:
      return "exponential";
  }
  return "unknown";
}

std::string_view ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kUnbounded:
      return "unbounded";
    case SolveStatus::kMaxIterations:
      return "max_iterations";
    case SolveStatus::kNumericalFailure:
      return "numerical_failure";
  }
  return "unknown";
}

ConeProgram::ConeProgram(int n_vars)
    : n_vars_(n_vars), objective_(Eigen::VectorXd::Zero(std::max(n_vars, 0))) {
  if (n_vars < 1) {
    throw std::invalid_argument("cone program needs at least one variable");
  }
}

void ConeProgram::set_objective(Eigen::VectorXd objective) {
  if (objective.size() != n_vars_) {
    throw std::invalid_argument("objective length must equal n_vars");
  }
  objective_ = std::move(objective);
}

void ConeProgram::set_objective_coeff(int var, double value) {
  if (var < 0 || var >= n_vars_) {
    throw std::out_of_range("objective index out of range");
  }
  objective_[var] = value;
}

ConeProgram& ConeProgram::add_block(Eigen::MatrixXd a, Eigen::VectorXd b,
                                    ConeKind cone, std::string label) {
  if (a.cols() != n_vars_) {
    throw std::invalid_argument("block has " + std::to_string(a.cols()) +
                                " columns, program has " +
                                std::to_string(n_vars_) + " variables");
  }
  if (b.size() != a.rows()) {
    throw std::invalid_argument("block offset length must equal its rows");
  }
  const auto rows = a.rows();
  bool ok = rows >= 1;
  switch (cone) {
    case ConeKind::kSecondOrder:
      ok = rows >= 2;
      break;
    case ConeKind::kRotatedSecondOrder:
      ok = rows >= 3;
      break;
    case ConeKind::kExponential:
      ok = rows == 3;
      break;
    default:
      break;
  }
  if (!ok) {
    throw std::invalid_argument("invalid row count " + std::to_string(rows) +
                                " for a " + std::string(ToString(cone)) +
                                " block");
  }
  if (!a.allFinite() || !b.allFinite()) {
    throw std::invalid_argument("block data must be finite");
  }
  blocks_.push_back({cone, std::move(a), std::move(b), std::move(label)});
  return *this;
}

int ConeProgram::total_rows() const {
  int rows = 0;
  for (const auto& blk : blocks_) rows += static_cast<int>(blk.a.rows());
  return rows;
}

void ConeProgram::WriteText(std::ostream& out) const {
  const auto precision = out.precision();
  out << std::setprecision(17);
  out << "cone_program " << n_vars_ << "\n";
  out << "objective";
  for (Eigen::Index i = 0; i < objective_.size(); ++i) {
    out << ' ' << objective_[i];
  }
  out << "\n";
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& blk = blocks_[i];
    out << "block " << i << ' ' << ToString(blk.cone) << ' ' << blk.a.rows();
    if (!blk.label.empty()) out << ' ' << blk.label;
    out << "\n";
    for (Eigen::Index r = 0; r < blk.a.rows(); ++r) {
      for (Eigen::Index c = 0; c < blk.a.cols(); ++c) {
        out << blk.a(r, c) << ' ';
      }
      out << "| " << blk.b[r] << "\n";
    }
  }
  out << std::setprecision(static_cast<int>(precision));
}

namespace {

double SecondOrderDistance(double t, const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double nv = v.norm();
  if (nv <= t) return 0.0;
  if (nv <= -t) return std::hypot(t, nv);
  // Projection is ((t + nv) / 2) * (1, v / nv).
  const double scale = 0.5 * (t + nv);
  return std::hypot(t - scale, nv - scale);
}

// Squared distance from s to the ray {y (r, 1, e^r) : y >= 0}.
double RayDistanceSq(const Eigen::Vector3d& s, double r) {
  const Eigen::Vector3d d(r, 1.0, std::exp(r));
  const double proj = std::max(0.0, s.dot(d));
  return std::max(0.0, s.squaredNorm() - proj * proj / d.squaredNorm());
}

double ExponentialDistance(const Eigen::Vector3d& s) {
  const double x = s[0];
  const double y = s[1];
  const double z = s[2];
  if ((y > 0.0 && z > 0.0 && y * std::log(z / y) >= x) ||
      (y == 0.0 && x <= 0.0 && z >= 0.0)) {
    return 0.0;
  }
  // Polar cone: the projection is the origin.
  if ((x > 0.0 && x * std::exp(y / x) <= -std::exp(1.0) * z) ||
      (x == 0.0 && y <= 0.0 && z <= 0.0)) {
    return s.norm();
  }
  // Face {(x, 0, z) : x <= 0, z >= 0} of the closure.
  double best = std::hypot(std::max(x, 0.0), y, std::min(z, 0.0));

  // Smooth part of the boundary, parameterized by r = x / y.
  constexpr double kLo = -60.0;
  constexpr double kHi = 60.0;
  constexpr int kGrid = 480;
  double best_r = kLo;
  double best_sq = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double r = kLo + (kHi - kLo) * i / kGrid;
    const double d = RayDistanceSq(s, r);
    if (d < best_sq) {
      best_sq = d;
      best_r = r;
    }
  }
  const double step = (kHi - kLo) / kGrid;
  double lo = best_r - step;
  double hi = best_r + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = hi - inv_phi * (hi - lo);
  double b = lo + inv_phi * (hi - lo);
  double fa = RayDistanceSq(s, a);
  double fb = RayDistanceSq(s, b);
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    if (fa < fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - inv_phi * (hi - lo);
      fa = RayDistanceSq(s, a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + inv_phi * (hi - lo);
      fb = RayDistanceSq(s, b);
    }
  }
  best_sq = std::min({best_sq, fa, fb});
  return std::min(best, std::sqrt(best_sq));
}

}  // namespace

double DistanceToCone(ConeKind cone,
                      const Eigen::Ref<const Eigen::VectorXd>& s) {
  switch (cone) {
    case ConeKind::kZero:
      return s.norm();
    case ConeKind::kNonnegative:
      return s.cwiseMin(0.0).norm();
    case ConeKind::kSecondOrder:
      return SecondOrderDistance(s[0], s.tail(s.size() - 1));
    case ConeKind::kRotatedSecondOrder: {
      // An orthogonal change of coordinates maps the rotated cone onto the
      // standard one.
      Eigen::VectorXd v(s.size() - 1);
      v[0] = (s[0] - s[1]) / std::sqrt(2.0);
      v.tail(s.size() - 2) = s.tail(s.size() - 2);
      return SecondOrderDistance((s[0] + s[1]) / std::sqrt(2.0), v);
    }
    case ConeKind::kExponential:
      return ExponentialDistance(Eigen::Vector3d(s[0], s[1], s[2]));
  }
  return std::numeric_limits<double>::infinity();
}

bool InInterior(ConeKind cone, const Eigen::Ref<const Eigen::VectorXd>& s) {
  switch (cone) {
    case ConeKind::kZero:
      return false;
    case ConeKind::kNonnegative:
      return (s.array() > 0.0).all();
    case ConeKind::kSecondOrder: {
      const double t = s[0];
      return t > 0.0 && t * t - s.tail(s.size() - 1).squaredNorm() > 0.0;
    }
    case ConeKind::kRotatedSecondOrder:
      return s[0] > 0.0 && s[1] > 0.0 &&
             2.0 * s[0] * s[1] - s.tail(s.size() - 2).squaredNorm() > 0.0;
    case ConeKind::kExponential:
      return s[1] > 0.0 && s[2] > 0.0 &&
             s[1] * std::log(s[2] / s[1]) - s[0] > 0.0;
  }
  return false;
}

bool VerifyReport::feasible() const {
  return std::none_of(blocks.begin(), blocks.end(),
                      [](const BlockResidual& r) { return r.violated; });
}

double VerifyReport::max_residual() const {
  double worst = 0.0;
  for (const auto& r : blocks) worst = std::max(worst, r.residual);
  return worst;
}

VerifyReport Verify(const ConeProgram& program, const Eigen::VectorXd& x,
                    double tol) {
  if (x.size() != program.n_vars()) {
    throw std::invalid_argument("point length must equal n_vars");
  }
  VerifyReport report;
  const auto& blocks = program.blocks();
  report.blocks.reserve(blocks.size());
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& blk = blocks[i];
    const Eigen::VectorXd s = blk.a * x + blk.b;
    const double residual = DistanceToCone(blk.cone, s);
    report.blocks.push_back({static_cast<int>(i), blk.cone, blk.label,
                             residual, !(residual <= tol)});
  }
  return report;
}

}  // namespace rsbeam::cone
