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

#include "mfland/orbit.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "mfland/oracle.hpp"

namespace mfland {

namespace {

VectorXd singular_values_of(const MatrixXd& A) {
  Eigen::JacobiSVD<MatrixXd> svd(A);
  return svd.singularValues();
}

}  // namespace

GroupElement::GroupElement(const MatrixXd& A) {
  if (A.rows() != A.cols() || A.rows() < 1) {
    throw DimensionError("group element must be a nonempty square matrix");
  }
  if (!A.allFinite()) throw SingularGroupElement("group element is not finite");
  sv_ = singular_values_of(A);
  const double smin = sv_(sv_.size() - 1);
  if (!(smin > sv_(0) * 64.0 * std::numeric_limits<double>::epsilon())) {
    throw SingularGroupElement("group element is singular");
  }
  A_ = A;
  A_inv_ = A.fullPivLu().inverse();
}

GroupElement::GroupElement(MatrixXd A, MatrixXd A_inv, VectorXd sv)
    : A_(std::move(A)), A_inv_(std::move(A_inv)), sv_(std::move(sv)) {}

GroupElement GroupElement::identity(int k) {
  return GroupElement(MatrixXd::Identity(k, k), MatrixXd::Identity(k, k),
                      VectorXd::Ones(k));
}

GroupElement GroupElement::scalar(int k, double a) {
  if (!(a != 0.0 && std::isfinite(a))) {
    throw SingularGroupElement("scale must be finite and nonzero");
  }
  return GroupElement(a * MatrixXd::Identity(k, k),
                      (1.0 / a) * MatrixXd::Identity(k, k),
                      VectorXd::Constant(k, std::abs(a)));
}

GroupElement GroupElement::inverse() const {
  return GroupElement(A_inv_, A_, singular_values_of(A_inv_));
}

GroupElement GroupElement::inverse_transpose() const {
  return GroupElement(A_inv_.transpose(), A_.transpose(),
                      singular_values_of(A_inv_));
}

GroupElement GroupElement::operator*(const GroupElement& other) const {
  MatrixXd prod = A_ * other.A_;
  return GroupElement(prod, other.A_inv_ * A_inv_, singular_values_of(prod));
}

FactorPair apply_group_action(const GroupElement& g, const FactorPair& p) {
  if (p.k() != g.k() || p.S.rows() != g.k()) {
    throw DimensionError("group element size does not match k");
  }
  return {p.W * g.A(), g.A_inv() * p.S};
}

TangentPair apply_group_action(const GroupElement& g, const TangentPair& d) {
  if (d.G.cols() != g.k() || d.H.rows() != g.k()) {
    throw DimensionError("group element size does not match k");
  }
  return {d.G * g.A(), g.A_inv() * d.H};
}

double induced_norm(const GroupElement& g) {
  const VectorXd& s = g.singular_values();
  return std::max(s(0), 1.0 / s(s.size() - 1));
}

double transported_lambda_min_bound(double lambda_min_at_p,
                                    const GroupElement& g) {
  if (!(lambda_min_at_p < 0.0)) {
    throw NotASaddle("transported bound needs a negative eigenvalue");
  }
  const double norm = induced_norm(g);
  return lambda_min_at_p / (norm * norm);
}

Inertia inertia_of(const DataMatrixSVD& X, const FactorPair& p,
                   double rel_tol) {
  return inertia_from_values(numeric_spectrum(dense_hessian(X, p)).values,
                             rel_tol);
}

MatrixXd balance_matrix(const FactorPair& p) {
  return p.W.transpose() * p.W - p.S * p.S.transpose();
}

double balance_residual(const FactorPair& p, const MatrixXd& C) {
  if (C.rows() != p.k() || C.cols() != p.k()) {
    throw DimensionError("balance target must be k x k");
  }
  const double scale = std::max(1.0, C.norm());
  if ((C - C.transpose()).norm() > 1e-12 * scale) {
    throw InvalidInput("balance target must be symmetric");
  }
  return (balance_matrix(p) - C).norm();
}

std::optional<GroupElement> intersect_M0(const CanonicalPoint& cp) {
  const VectorXd lambda = cp.lambda();
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (!(lambda(j) > 0.0)) return std::nullopt;
  }
  if (cp.C0.size() > 0 && cp.C0.cwiseAbs().maxCoeff() > 1e-12) {
    return std::nullopt;
  }
  MatrixXd A = MatrixXd::Identity(cp.k, cp.k);
  for (int j = 0; j < cp.q(); ++j) A(j, j) = std::sqrt(lambda(j));
  return GroupElement(A);
}

}  // namespace mfland
