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

// Reduction of an arbitrary critical point to its canonical representative.
//
// With W of rank q the transport is assembled from three factors:
//   C  isolates q independent columns and factors W = [U_hat 0] C,
//   D  rotates U_hat onto the stored singular vectors: [U_hat 0] = [U_sel 0] D,
//   E  clears the V_sel component of the bottom rows of S.
// Then A = E D C and (W, S) = L_A([U_sel 0], E D C S).

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "mfland/calculus.hpp"
#include "mfland/canonical.hpp"

namespace mfland {

namespace {

// Ranges [begin, end) of stored singular values that agree within the value
// tolerance. The trailing zeros form one cluster.
std::vector<std::pair<int, int>> value_clusters(const DataMatrixSVD& X) {
  std::vector<std::pair<int, int>> out;
  const double tol = X.value_tolerance();
  int begin = 0;
  for (int i = 1; i <= X.m(); ++i) {
    if (i == X.m() || X.sigma_at(begin) - X.sigma_at(i) > tol) {
      out.emplace_back(begin, i);
      begin = i;
    }
  }
  return out;
}

// Orthonormal basis of span(B) whose leading columns span the part of M
// inside span(B). B has orthonormal columns.
MatrixXd completed_basis(const MatrixXd& B, const MatrixXd& M) {
  Eigen::JacobiSVD<MatrixXd> svd(B.transpose() * M, Eigen::ComputeFullU);
  return B * svd.matrixU();
}

struct AlignedBasis {
  DataMatrixSVD X;
  std::vector<int> selected;
};

// Step (iii): find stored singular vectors spanning the column space of U_hat,
// rotating the stored basis inside a repeated value when necessary.
AlignedBasis align_with_stored_basis(const DataMatrixSVD& X,
                                     const MatrixXd& U_hat) {
  const MatrixXd T = X.U().transpose() * U_hat;
  MatrixXd U = X.U();
  MatrixXd V = X.V();
  bool rebased = false;
  std::vector<int> selected;

  for (const auto& [begin, end] : value_clusters(X)) {
    const int size = end - begin;
    const double energy = T.middleRows(begin, size).squaredNorm();
    const int dims = static_cast<int>(std::lround(energy));
    if (std::abs(energy - dims) > 1e-6) {
      throw NumericalFailure(
          "column space of W is not an invariant subspace of X X^T");
    }
    if (dims == 0) continue;

    std::vector<int> order(size);
    std::iota(order.begin(), order.end(), begin);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return T.row(a).squaredNorm() > T.row(b).squaredNorm();
    });
    double captured = 0.0;
    for (int t = 0; t < dims; ++t) captured += T.row(order[t]).squaredNorm();

    if (captured >= dims - 1e-8) {
      std::vector<int> chosen(order.begin(), order.begin() + dims);
      std::sort(chosen.begin(), chosen.end());
      selected.insert(selected.end(), chosen.begin(), chosen.end());
      continue;
    }

    // The selected directions are a proper, non-coordinate subspace of a
    // repeated singular value: rebuild the cluster basis around them.
    const MatrixXd B = X.U().middleCols(begin, size);
    const MatrixXd Ub = completed_basis(B, B * T.middleRows(begin, size));
    U.middleCols(begin, size) = Ub;
    const double s = X.sigma_at(begin);
    if (s > 0.0) {
      V.middleCols(begin, size) = X.X().transpose() * Ub / s;
    }
    for (int t = 0; t < dims; ++t) selected.push_back(begin + t);
    rebased = true;
  }
  std::sort(selected.begin(), selected.end());
  return {rebased ? X.with_basis(U, V) : X, std::move(selected)};
}

}  // namespace

ReducedPoint reduce_to_canonical(const DataMatrixSVD& X, const FactorPair& p,
                                 double tol) {
  check_dimensions(X, p);
  if (!(tol > 0.0 && tol < 1.0)) {
    throw InvalidInput("reduction tolerance must lie in (0, 1)");
  }
  if (!is_critical(X, p, tol)) {
    throw NotCritical("point is not critical at tolerance " +
                      std::to_string(tol));
  }
  const int k = p.k();
  const int r = X.rank();

  Eigen::JacobiSVD<MatrixXd> w_svd(p.W);
  const VectorXd s = w_svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;

  if (smax <= tol * std::max(1.0, X.frobenius_norm())) {
    MatrixXd C0 = X.V0().transpose() * p.S.transpose();
    return {build_canonical(X, Selection(), k, C0), MatrixXd::Identity(k, k)};
  }

  int q_low = 0;
  int q_high = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > 100.0 * tol * smax) ++q_low;
    if (s(i) > 0.01 * tol * smax) ++q_high;
  }
  if (q_low != q_high) throw RankAmbiguous(q_low, q_high);
  const int q = q_low;

  // (i) Column pivoting picks q independent columns: W P = [W_hat, W_hat F].
  Eigen::ColPivHouseholderQR<MatrixXd> qr(p.W);
  const MatrixXd P = qr.colsPermutation().toDenseMatrix().cast<double>();
  const MatrixXd WP = p.W * P;
  const MatrixXd W_hat = WP.leftCols(q);

  // (ii) Compact SVD of W_hat, and C with W = [U_hat 0] C.
  Eigen::JacobiSVD<MatrixXd> hat_svd(W_hat,
                                     Eigen::ComputeThinU | Eigen::ComputeThinV);
  const MatrixXd U_hat = hat_svd.matrixU();
  const MatrixXd SVt = hat_svd.singularValues().asDiagonal() *
                       hat_svd.matrixV().transpose();
  const MatrixXd F = hat_svd.solve(WP.rightCols(k - q));
  MatrixXd C_block = MatrixXd::Identity(k, k);
  C_block.topLeftCorner(q, q) = SVt;
  C_block.topRightCorner(q, k - q) = SVt * F;
  const MatrixXd C = C_block * P.transpose();

  // (iii) Align U_hat with stored left singular vectors.
  AlignedBasis aligned = align_with_stored_basis(X, U_hat);
  const DataMatrixSVD& Xb = aligned.X;
  const Selection sel(aligned.selected);
  if (sel.q() != q) {
    throw NumericalFailure("alignment recovered " + std::to_string(sel.q()) +
                           " singular directions, expected " +
                           std::to_string(q));
  }
  MatrixXd U_sel(X.m(), q);
  MatrixXd V_sel(X.n(), q);
  for (int j = 0; j < q; ++j) {
    U_sel.col(j) = Xb.U().col(sel.indices()[j]);
    V_sel.col(j) = Xb.V().col(sel.indices()[j]);
  }
  MatrixXd D = MatrixXd::Identity(k, k);
  D.topLeftCorner(q, q) = U_sel.transpose() * U_hat;

  // (iv) Split the bottom rows of S along V_sel (positive values) and V0.
  const MatrixXd DC = D * C;
  const MatrixXd S_b = (DC * p.S).bottomRows(k - q);
  const VectorXd lambda = sel.values(Xb);
  const MatrixXd C0 = Xb.V0().transpose() * S_b.transpose();

  // (v) Unipotent elimination of the V_sel component.
  MatrixXd E = MatrixXd::Identity(k, k);
  for (int j = 0; j < q; ++j) {
    if (lambda(j) <= 0.0 || r == 0) continue;
    const VectorXd c_bar = S_b * V_sel.col(j);
    E.block(q, j, k - q, 1) = -c_bar / lambda(j);
  }

  return {build_canonical(Xb, sel, k, C0), E * DC};
}

}  // namespace mfland
