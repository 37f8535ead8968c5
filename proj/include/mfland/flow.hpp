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

#pragma once

#include <iosfwd>
#include <random>
#include <vector>

#include "mfland/canonical.hpp"
#include "mfland/core.hpp"

namespace mfland {

/// Adaptive RK4 with step doubling. A step is accepted when the estimated
/// local error is below abs_tol + rel_tol * ||(W, S)||.
struct StepControl {
  double initial_step = 1e-2;
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double min_step = 1e-13;
  double max_step = 1.0;
  long max_steps = 5'000'000;
};

enum class FlowStatus { Converged, MaxTimeReached, Diverged };

const char* to_string(FlowStatus status);

struct FlowSample {
  double t = 0.0;
  double J = 0.0;
  double grad_norm = 0.0;
  /// ||(W^T W - S S^T)(t) - (W^T W - S S^T)(0)||_F.
  double drift = 0.0;
};

struct FlowTrajectory {
  std::vector<FlowSample> samples;
  FactorPair terminal;
  FlowStatus status = FlowStatus::MaxTimeReached;
  /// W^T W - S S^T at t = 0.
  MatrixXd initial_balance;
  double max_drift = 0.0;
  /// Largest |(||W||^2 - ||S||^2)(t) - (||W||^2 - ||S||^2)(0)|.
  double max_norm_gap_drift = 0.0;
  /// Largest J(t_{i+1}) - J(t_i) over accepted steps.
  double max_J_increase = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// Integrates d(W, S)/dt = -grad J until ||grad J|| <= grad_tol * max(1,
/// ||X||_F), t reaches t_max, or ||(W, S)|| exceeds 1e12. Throws
/// StiffnessFailure when the step size underflows.
FlowTrajectory integrate_flow(const DataMatrixSVD& X, const FactorPair& p0,
                              double grad_tol, double t_max,
                              const StepControl& ctrl = {});

/// Gaussian W and S = (W^T W)^{1/2} Y^T with Y an orthonormal n x k frame, so
/// that W^T W = S S^T. Requires k <= n.
FactorPair random_balanced_point(int m, int n, int k, std::mt19937_64& rng,
                                 double scale = 1.0);

/// Independent Gaussian entries.
FactorPair random_gaussian_point(int m, int n, int k, std::mt19937_64& rng,
                                 double scale = 1.0);

struct LimitDiagnosis {
  int q = 0;
  VectorXd lambda;
  bool maximal = false;
  CriticalKind kind = CriticalKind::StrictSaddle;
  /// Residual of the terminal point against the initial balance matrix.
  double balance_residual = 0.0;
  /// Smallest eigenvalue of the dense Hessian at the terminal point.
  double lambda_min = 0.0;
};

/// Reduces the terminal point of a converged trajectory and classifies it.
/// Throws InvalidInput for an unconverged trajectory and NotCritical when the
/// terminal point fails the criticality test at tol.
LimitDiagnosis classify_limit(const DataMatrixSVD& X,
                              const FlowTrajectory& traj, double tol);

/// Columns t,J,gradnorm,drift.
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

}  // namespace mfland
