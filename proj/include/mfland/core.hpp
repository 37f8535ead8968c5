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

#include <cmath>
#include <iosfwd>
#include <string>

#include <Eigen/Dense>

#include "mfland/errors.hpp"

namespace mfland {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/// Default relative rank tolerance: sigma_i counts toward the rank when it
/// exceeds rank_tol * sigma_1.
inline constexpr double kDefaultRankTol = 1e-10;

/// Relative tolerance (against sigma_1) under which two singular values are
/// treated as the same value.
inline constexpr double kValueRelTol = 1e-10;

/**
 * The target matrix X together with one fixed full SVD X = U Sigma V^T.
 *
 * X is stored in the internal orientation m <= n. When the user supplied a
 * matrix with more rows than columns it is transposed on load and
 * `transposed()` reports it. The SVD is chosen once (largest-magnitude entry
 * of every u_i made positive) and reused by every construction built on this
 * instance. Singular values at or below the rank tolerance are stored as
 * exact zeros.
 */
class DataMatrixSVD {
 public:
  int m() const { return static_cast<int>(x_.rows()); }
  int n() const { return static_cast<int>(x_.cols()); }
  int rank() const { return rank_; }
  bool transposed() const { return transposed_; }

  const MatrixXd& X() const { return x_; }
  const MatrixXd& U() const { return u_; }
  const MatrixXd& V() const { return v_; }
  /// sigma_1 >= ... >= sigma_m, zeros past the rank.
  const VectorXd& sigma() const { return sigma_; }

  double sigma_at(int i) const { return i < m() ? sigma_(i) : 0.0; }
  double frobenius_norm() const { return x_norm_; }

  /// [v_{r+1}, ..., v_n], the right singular vectors of the null space.
  MatrixXd V0() const { return v_.rightCols(n() - rank_); }

  /// Absolute tolerance for deciding two singular values are equal.
  double value_tolerance() const {
    return kValueRelTol * (sigma_.size() > 0 ? sigma_(0) : 1.0);
  }

  /// The diagonal m x n matrix Sigma.
  MatrixXd Sigma() const;

  /// Same X and singular values with a different compatible singular-vector
  /// basis. Used when a critical point lives in a rotated eigenbasis of a
  /// repeated singular value.
  DataMatrixSVD with_basis(MatrixXd U, MatrixXd V) const;

  friend DataMatrixSVD load_data_matrix(const MatrixXd& raw, double rank_tol);

 private:
  DataMatrixSVD() = default;

  MatrixXd x_;
  MatrixXd u_;
  MatrixXd v_;
  VectorXd sigma_;
  int rank_ = 0;
  bool transposed_ = false;
  double x_norm_ = 0.0;
};

/// Computes and freezes the SVD of `raw`. Throws InvalidInput for an all-zero
/// matrix or a rank_tol outside (0, 1), NumericalFailure if the SVD fails.
DataMatrixSVD load_data_matrix(const MatrixXd& raw,
                               double rank_tol = kDefaultRankTol);

/// A point (W, S) of R^{m x k} x R^{k x n}.
struct FactorPair {
  MatrixXd W;
  MatrixXd S;

  int k() const { return static_cast<int>(W.cols()); }
  double squared_norm() const { return W.squaredNorm() + S.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }
};

/// A direction (G, H) in the same product space. Also the carrier for Hessian
/// eigenvectors.
struct TangentPair {
  MatrixXd G;
  MatrixXd H;

  static TangentPair zeros(int m, int n, int k) {
    return {MatrixXd::Zero(m, k), MatrixXd::Zero(k, n)};
  }

  double squared_norm() const { return G.squaredNorm() + H.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }
};

/// <(G,H),(G',H')> = <G,G'> + <H,H'>.
double inner(const TangentPair& a, const TangentPair& b);

TangentPair operator+(const TangentPair& a, const TangentPair& b);
TangentPair operator-(const TangentPair& a, const TangentPair& b);
TangentPair operator*(double s, const TangentPair& a);

/// Throws DimensionError when p does not fit X.
void check_dimensions(const DataMatrixSVD& X, const FactorPair& p);
void check_dimensions(const DataMatrixSVD& X, const FactorPair& p,
                      const TangentPair& d);

/// E = WS - X.
MatrixXd residual(const DataMatrixSVD& X, const FactorPair& p);

/// J(W, S) = 1/2 ||X - WS||_F^2.
double evaluate_J(const DataMatrixSVD& X, const FactorPair& p);

/// Maps a factor pair of the user's matrix into the internal orientation
/// (identity unless X was transposed on load, in which case (W, S) becomes
/// (S^T, W^T)). The map is its own inverse.
FactorPair to_internal(const DataMatrixSVD& X, const FactorPair& user);
FactorPair to_user(const DataMatrixSVD& X, const FactorPair& internal);

/// Row-major CSV, no header, decimal floats. Ragged rows, empty input and
/// unparsable cells raise InvalidInput.
MatrixXd parse_csv_matrix(std::istream& in);
MatrixXd read_csv_matrix(const std::string& path);
void write_csv_matrix(std::ostream& out, const MatrixXd& M);

}  // namespace mfland
