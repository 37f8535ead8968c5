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

#include <random>

#include "mfland/core.hpp"
#include "mfland/orbit.hpp"

namespace mfland {

using Rng = std::mt19937_64;

MatrixXd random_gaussian(int rows, int cols, Rng& rng);

/// Haar-distributed orthogonal matrix (QR of a Gaussian with sign fix).
MatrixXd random_orthogonal(int n, Rng& rng);

/// Q1 diag(s) Q2 with log s uniform on [-log(max_cond)/2, log(max_cond)/2],
/// so cond(A) <= max_cond and ||A|| ||A^{-1}|| stay balanced around 1.
GroupElement random_group_element(int k, double max_cond, Rng& rng);

/// U diag(sigma) V^T with random orthogonal U (m x m) and V (n x n).
MatrixXd matrix_with_singular_values(const VectorXd& sigma, int m, int n,
                                     Rng& rng);

/// m x n matrix with sigma_i on the diagonal.
MatrixXd diagonal_matrix(const VectorXd& sigma, int m, int n);

}  // namespace mfland
