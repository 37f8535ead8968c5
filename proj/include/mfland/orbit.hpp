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

#include <optional>

#include "mfland/canonical.hpp"
#include "mfland/core.hpp"
#include "mfland/spectrum.hpp"

namespace mfland {

/// An invertible k x k matrix A acting by L_A(W, S) = (W A, A^{-1} S).
class GroupElement {
 public:
  /// Throws SingularGroupElement when A is singular to working precision.
  explicit GroupElement(const MatrixXd& A);

  static GroupElement identity(int k);
  static GroupElement scalar(int k, double a);

  int k() const { return static_cast<int>(A_.rows()); }
  const MatrixXd& A() const { return A_; }
  const MatrixXd& A_inv() const { return A_inv_; }
  /// Singular values of A, nonincreasing.
  const VectorXd& singular_values() const { return sv_; }
  double condition_number() const { return sv_(0) / sv_(sv_.size() - 1); }

  GroupElement inverse() const;
  /// A^{-T}, the element transporting gradients.
  GroupElement inverse_transpose() const;
  GroupElement operator*(const GroupElement& other) const;

 private:
  GroupElement(MatrixXd A, MatrixXd A_inv, VectorXd sv);

  MatrixXd A_;
  MatrixXd A_inv_;
  VectorXd sv_;
};

FactorPair apply_group_action(const GroupElement& g, const FactorPair& p);
TangentPair apply_group_action(const GroupElement& g, const TangentPair& d);

/// max(smax(A), 1 / smin(A)).
double induced_norm(const GroupElement& g);

/// lambda_min_at_p / ||L_A||^2. Throws NotASaddle for nonnegative input.
double transported_lambda_min_bound(double lambda_min_at_p,
                                    const GroupElement& g);

/// Sign counts of the dense Hessian spectrum; |rho| <= rel_tol * max|rho| is
/// zero. The threshold follows the point's own spectrum, so it also serves
/// at transported points, whose extreme eigenvalues absorb the growth of
/// the congruence.
Inertia inertia_of(const DataMatrixSVD& X, const FactorPair& p,
                   double rel_tol = kDefaultInertiaTol);

/// ||W^T W - S S^T - C||_F. Throws InvalidInput for an asymmetric C.
double balance_residual(const FactorPair& p, const MatrixXd& C);

/// W^T W - S S^T.
MatrixXd balance_matrix(const FactorPair& p);

/// blockdiag(Lambda^{1/2}, I) when Lambda is invertible and C0 vanishes;
/// absent otherwise.
std::optional<GroupElement> intersect_M0(const CanonicalPoint& cp);

}  // namespace mfland
