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

#include "mfland/random.hpp"

#include <cmath>

#include <Eigen/QR>

namespace mfland {

MatrixXd random_gaussian(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = normal(rng);
  return out;
}

MatrixXd random_orthogonal(int n, Rng& rng) {
  const MatrixXd G = random_gaussian(n, n, rng);
  Eigen::HouseholderQR<MatrixXd> qr(G);
  MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, n);
  const MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (R(j, j) < 0.0) Q.col(j) *= -1.0;
  }
  return Q;
}

GroupElement random_group_element(int k, double max_cond, Rng& rng) {
  if (!(max_cond >= 1.0)) throw InvalidInput("max_cond must be >= 1");
  const double half = 0.5 * std::log(max_cond);
  std::uniform_real_distribution<double> unif(-half, half);
  VectorXd s(k);
  for (int i = 0; i < k; ++i) s(i) = std::exp(unif(rng));
  const MatrixXd A =
      random_orthogonal(k, rng) * s.asDiagonal() * random_orthogonal(k, rng);
  return GroupElement(A);
}

MatrixXd diagonal_matrix(const VectorXd& sigma, int m, int n) {
  MatrixXd out = MatrixXd::Zero(m, n);
  for (Eigen::Index i = 0; i < sigma.size() && i < std::min(m, n); ++i) {
    out(i, i) = sigma(i);
  }
  return out;
}

MatrixXd matrix_with_singular_values(const VectorXd& sigma, int m, int n,
                                     Rng& rng) {
  return random_orthogonal(m, rng) * diagonal_matrix(sigma, m, n) *
         random_orthogonal(n, rng).transpose();
}

}  // namespace mfland
