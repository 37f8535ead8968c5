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

#include <cstdint>

#include "mfland/core.hpp"

namespace mfland {

/// Largest k(m+n) the dense oracle accepts.
inline constexpr int kMaxDenseDimension = 5000;

/// Coordinates of (G, H): vec(G) column-major, then vec(H) column-major.
VectorXd flatten(const TangentPair& d);
TangentPair unflatten(const VectorXd& v, int m, int n, int k);

struct DenseHessian {
  /// Symmetrized k(m+n) x k(m+n) matrix in the flatten() basis.
  MatrixXd matrix;
  int m = 0;
  int n = 0;
  int k = 0;
  /// ||M - M^T||_F / ||M||_F before symmetrization.
  double asymmetry = 0.0;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// Column c is the Hessian applied to the c-th coordinate direction.
/// Columns are assembled in parallel. Throws TooLarge past kMaxDenseDimension.
DenseHessian dense_hessian(const DataMatrixSVD& X, const FactorPair& p);
/// Serial reference for dense_hessian.
DenseHessian dense_hessian_serial(const DataMatrixSVD& X, const FactorPair& p);

struct NumericSpectrum {
  /// Ascending.
  VectorXd values;
  /// Column c pairs with values(c); empty unless requested.
  MatrixXd vectors;
  /// ||M V - V diag(values)||_F / ||M||_F when vectors were computed.
  double residual = 0.0;
};

NumericSpectrum numeric_spectrum(const DenseHessian& h,
                                 bool with_vectors = false);
NumericSpectrum numeric_spectrum(const MatrixXd& symmetric,
                                 bool with_vectors = false);

/// Matrix of the linear map (G, H) -> (G B, B^{-1} H) in the flatten() basis.
MatrixXd action_matrix(const MatrixXd& B, const MatrixXd& B_inv, int m, int n);

struct FdReport {
  int trials = 0;
  double worst_gradient_error = 0.0;
  double worst_second_error = 0.0;
  bool passed = false;
};

inline constexpr double kFdGradientStep = 1e-5;
inline constexpr double kFdSecondStep = 1e-4;
inline constexpr double kFdGradientTol = 1e-6;
inline constexpr double kFdSecondTol = 1e-4;

/// Central differences of J along seeded random unit directions against the
/// analytic gradient and second derivative. Relative errors use the
/// denominator max(|analytic|, 1).
FdReport fd_validate(const DataMatrixSVD& X, const FactorPair& p, int trials,
                     std::uint64_t seed);

}  // namespace mfland
