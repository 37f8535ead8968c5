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

#include "mfland/core.hpp"

namespace mfland {

/// (E S^T, W^T E) with E = WS - X.
TangentPair gradient(const DataMatrixSVD& X, const FactorPair& p);

/// Hessian of J at p applied to d:
/// (G S S^T + W H S^T + E H^T, W^T W H + W^T G S + G^T E).
TangentPair hessian_apply(const DataMatrixSVD& X, const FactorPair& p,
                          const TangentPair& d);

/// Quadratic form of the Hessian along d:
/// ||GS||^2 + ||WH||^2 + 2 tr(H^T W^T G S + H^T G^T E).
double second_derivative(const DataMatrixSVD& X, const FactorPair& p,
                         const TangentPair& d);

/// ||gradient|| <= tol * max(1, ||X||_F).
bool is_critical(const DataMatrixSVD& X, const FactorPair& p, double tol);

/// The orbit tangent (WK, -KS) generated by K.
TangentPair orbit_tangent(const FactorPair& p, const MatrixXd& K);

}  // namespace mfland
