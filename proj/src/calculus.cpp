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

#include "mfland/calculus.hpp"

#include <algorithm>

namespace mfland {

TangentPair gradient(const DataMatrixSVD& X, const FactorPair& p) {
  const MatrixXd E = residual(X, p);
  return {E * p.S.transpose(), p.W.transpose() * E};
}

TangentPair hessian_apply(const DataMatrixSVD& X, const FactorPair& p,
                          const TangentPair& d) {
  check_dimensions(X, p, d);
  const MatrixXd E = p.W * p.S - X.X();
  const MatrixXd& W = p.W;
  const MatrixXd& S = p.S;
  const MatrixXd& G = d.G;
  const MatrixXd& H = d.H;
  TangentPair out;
  out.G = G * (S * S.transpose()) + (W * H) * S.transpose() +
          E * H.transpose();
  out.H = (W.transpose() * W) * H + W.transpose() * (G * S) +
          G.transpose() * E;
  return out;
}

double second_derivative(const DataMatrixSVD& X, const FactorPair& p,
                         const TangentPair& d) {
  check_dimensions(X, p, d);
  const MatrixXd E = p.W * p.S - X.X();
  const MatrixXd GS = d.G * p.S;
  const MatrixXd WH = p.W * d.H;
  // tr(H^T W^T G S) = <WH, GS>; tr(H^T G^T E) = <GH, E>.
  const double cross = WH.cwiseProduct(GS).sum() +
                       (d.G * d.H).cwiseProduct(E).sum();
  return GS.squaredNorm() + WH.squaredNorm() + 2.0 * cross;
}

bool is_critical(const DataMatrixSVD& X, const FactorPair& p, double tol) {
  if (!(tol > 0.0)) throw InvalidInput("criticality tolerance must be > 0");
  return gradient(X, p).norm() <= tol * std::max(1.0, X.frobenius_norm());
}

TangentPair orbit_tangent(const FactorPair& p, const MatrixXd& K) {
  if (K.rows() != p.k() || K.cols() != p.k()) {
    throw DimensionError("orbit generator must be k x k");
  }
  return {p.W * K, -K * p.S};
}

}  // namespace mfland
