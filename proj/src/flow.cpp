// Copyright 2026 The mfland Authors. All Rights Reserved.
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

#include "mfland/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "mfland/calculus.hpp"
#include "mfland/oracle.hpp"
#include "mfland/orbit.hpp"

namespace mfland {

const char* to_string(FlowStatus status) {
  switch (status) {
    case FlowStatus::Converged:
      return "Converged";
    case FlowStatus::MaxTimeReached:
      return "MaxTimeReached";
    case FlowStatus::Diverged:
      return "Diverged";
  }
  return "unknown";
}

namespace {

constexpr double kDivergenceNorm = 1e12;

FactorPair axpy(const FactorPair& p, double h, const TangentPair& d) {
  return {p.W + h * d.G, p.S + h * d.H};
}

FactorPair rk4_step(const DataMatrixSVD& X, const FactorPair& p, double h) {
  const TangentPair k1 = -1.0 * gradient(X, p);
  const TangentPair k2 = -1.0 * gradient(X, axpy(p, 0.5 * h, k1));
  const TangentPair k3 = -1.0 * gradient(X, axpy(p, 0.5 * h, k2));
  const TangentPair k4 = -1.0 * gradient(X, axpy(p, h, k3));
  const TangentPair incr = k1 + 2.0 * k2 + 2.0 * k3 + k4;
  return axpy(p, h / 6.0, incr);
}

double norm_gap(const FactorPair& p) {
  return p.W.squaredNorm() - p.S.squaredNorm();
}

}  // namespace

FlowTrajectory integrate_flow(const DataMatrixSVD& X, const FactorPair& p0,
                              double grad_tol, double t_max,
                              const StepControl& ctrl) {
  check_dimensions(X, p0);
  if (!(grad_tol > 0.0)) throw InvalidInput("grad_tol must be > 0");
  if (!(t_max > 0.0)) throw InvalidInput("t_max must be > 0");
  if (!(ctrl.initial_step > 0.0 && ctrl.min_step > 0.0 &&
        ctrl.abs_tol > 0.0 && ctrl.rel_tol >= 0.0)) {
    throw InvalidInput("invalid step control");
  }

  FlowTrajectory traj;
  traj.initial_balance = balance_matrix(p0);
  const double gap0 = norm_gap(p0);
  const double threshold = grad_tol * std::max(1.0, X.frobenius_norm());

  FactorPair y = p0;
  double t = 0.0;
  double h = std::min(ctrl.initial_step, ctrl.max_step);
  double J_prev = evaluate_J(X, y);

  auto record = [&](double J, double gnorm) {
    const double drift = (balance_matrix(y) - traj.initial_balance).norm();
    traj.max_drift = std::max(traj.max_drift, drift);
    traj.max_norm_gap_drift =
        std::max(traj.max_norm_gap_drift, std::abs(norm_gap(y) - gap0));
    traj.samples.push_back({t, J, gnorm, drift});
  };

  double gnorm = gradient(X, y).norm();
  record(J_prev, gnorm);

  while (true) {
    if (gnorm <= threshold) {
      traj.status = FlowStatus::Converged;
      break;
    }
    if (y.norm() > kDivergenceNorm) {
      traj.status = FlowStatus::Diverged;
      break;
    }
    if (t >= t_max || traj.accepted_steps >= ctrl.max_steps) {
      traj.status = FlowStatus::MaxTimeReached;
      break;
    }

    const double step = std::min(h, t_max - t);
    const FactorPair full = rk4_step(X, y, step);
    const FactorPair half = rk4_step(X, rk4_step(X, y, 0.5 * step), 0.5 * step);
    const double err = std::sqrt((half.W - full.W).squaredNorm() +
                                 (half.S - full.S).squaredNorm()) /
                       15.0;
    const double scale = ctrl.abs_tol + ctrl.rel_tol * half.norm();
    const double ratio = err / scale;
    const double factor =
        ratio > 0.0 ? std::clamp(0.9 * std::pow(ratio, -0.2), 0.1, 4.0) : 4.0;

    if (ratio <= 1.0 && std::isfinite(ratio)) {
      y = half;
      t += step;
      ++traj.accepted_steps;
      const double J = evaluate_J(X, y);
      traj.max_J_increase = std::max(traj.max_J_increase, J - J_prev);
      J_prev = J;
      gnorm = gradient(X, y).norm();
      record(J, gnorm);
      h = std::min(step * factor, ctrl.max_step);
    } else {
      ++traj.rejected_steps;
      h = step * (std::isfinite(ratio) ? factor : 0.1);
      if (h < ctrl.min_step) {
        throw StiffnessFailure("step size underflow at t = " +
                               std::to_string(t));
      }
    }
  }
  traj.terminal = y;
  return traj;
}

FactorPair random_gaussian_point(int m, int n, int k, std::mt19937_64& rng,
                                 double scale) {
  std::normal_distribution<double> normal(0.0, scale);
  FactorPair p{MatrixXd(m, k), MatrixXd(k, n)};
  for (Eigen::Index i = 0; i < p.W.size(); ++i) p.W.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < p.S.size(); ++i) p.S.data()[i] = normal(rng);
  return p;
}

FactorPair random_balanced_point(int m, int n, int k, std::mt19937_64& rng,
                                 double scale) {
  if (k > n) throw InvalidInput("balanced initialization needs k <= n");
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd W(m, k);
  for (Eigen::Index i = 0; i < W.size(); ++i) W.data()[i] = scale * normal(rng);
  MatrixXd Y(n, k);
  for (Eigen::Index i = 0; i < Y.size(); ++i) Y.data()[i] = normal(rng);
  Eigen::HouseholderQR<MatrixXd> qr(Y);
  const MatrixXd frame = qr.householderQ() * MatrixXd::Identity(n, k);
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(W.transpose() * W);
  return {W, es.operatorSqrt() * frame.transpose()};
}

LimitDiagnosis classify_limit(const DataMatrixSVD& X,
                              const FlowTrajectory& traj, double tol) {
  if (traj.status != FlowStatus::Converged) {
    throw InvalidInput("limit classification needs a converged trajectory");
  }
  const ReducedPoint reduced = reduce_to_canonical(X, traj.terminal, tol);
  const CanonicalPoint& cp = reduced.canonical;
  LimitDiagnosis out;
  out.q = cp.q();
  out.lambda = cp.lambda();
  out.maximal = is_maximal(cp.basis, cp.selection);
  out.kind = classify_canonical(cp).kind;
  out.balance_residual = balance_residual(traj.terminal, traj.initial_balance);
  out.lambda_min =
      numeric_spectrum(dense_hessian(X, traj.terminal)).values(0);
  return out;
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
  out << "t,J,gradnorm,drift\n";
  char buf[128];
  for (const FlowSample& s : traj.samples) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", s.t, s.J,
                  s.grad_norm, s.drift);
    out << buf;
  }
}

}  // namespace mfland
