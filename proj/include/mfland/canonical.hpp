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
#include <string>
#include <vector>

#include "mfland/core.hpp"

namespace mfland {

/**
 * A strictly increasing list of 0-based indices into the sorted singular
 * values of X. The selected values lambda_j = sigma_{indices[j]} are therefore
 * nonincreasing. The empty selection (q = 0) is allowed and describes the
 * zero family.
 */
class Selection {
 public:
  Selection() = default;
  explicit Selection(std::vector<int> zero_based);

  /// From 1-based indices, as written on the command line.
  static Selection from_one_based(const std::vector<int>& one_based);
  /// Parses "1,3" (1-based). An empty string is the empty selection.
  static Selection parse(const std::string& text);

  int q() const { return static_cast<int>(indices_.size()); }
  const std::vector<int>& indices() const { return indices_; }
  bool contains(int i) const;

  /// The selected singular values in order.
  VectorXd values(const DataMatrixSVD& X) const;

  /// Throws InvalidSelection unless every index is < m.
  void validate(const DataMatrixSVD& X) const;

  std::string to_string_one_based() const;

 private:
  std::vector<int> indices_;
};

/// lambda_j == sigma_j (by value, within X.value_tolerance()) for all j.
bool is_maximal(const DataMatrixSVD& X, const Selection& sel);

/// Least 0-based j with lambda_j < sigma_j, absent for a maximal selection.
std::optional<int> first_deficit(const DataMatrixSVD& X, const Selection& sel);

/**
 * The critical point ([U_sel 0], [Lambda V_sel^T; C0^T V0^T]).
 *
 * `basis` is a copy of the data matrix whose singular-vector basis the point
 * is expressed in. It normally equals the caller's instance; reduction may
 * return a rotated basis inside a repeated singular value.
 */
struct CanonicalPoint {
  DataMatrixSVD basis;
  Selection selection;
  int k = 0;
  /// (n - r) x (k - q).
  MatrixXd C0;

  int q() const { return selection.q(); }
  VectorXd lambda() const { return selection.values(basis); }
  MatrixXd U_selected() const;
  MatrixXd V_selected() const;
  FactorPair materialize() const;
  /// 1/2 (sum sigma_i^2 - sum lambda_j^2).
  double J_value() const;
};

/// Throws InvalidSelection when q > min(k, m), DimensionError on C0 shape.
/// A 0 x 0 C0 is accepted as the zero block when k > q.
CanonicalPoint build_canonical(const DataMatrixSVD& X, const Selection& sel,
                               int k, const MatrixXd& C0);

/// (0, C0^T V0^T) with C0 of shape (n - r) x k.
FactorPair build_zero_family(const DataMatrixSVD& X, const MatrixXd& C0);

/// ([U_sel Lambda^{1/2} 0], [Lambda^{1/2} V_sel^T; 0]). Every selected value
/// must be positive (InvalidSelection otherwise).
FactorPair build_balanced(const DataMatrixSVD& X, const Selection& sel, int k);

enum class CriticalKind { GlobalMinimum, StrictSaddle };

const char* to_string(CriticalKind kind);

struct ClassificationResult {
  CriticalKind kind = CriticalKind::StrictSaddle;
  /// 0-based least deficit index, absent for maximal selections.
  std::optional<int> p;
  std::optional<double> lambda_min_closed_form;
};

ClassificationResult classify_canonical(const CanonicalPoint& cp);

struct ReducedPoint {
  CanonicalPoint canonical;
  /// L_A(canonical.materialize()) reproduces the input point.
  MatrixXd A;
};

/// Recovers the canonical representative of a critical point and the group
/// element carrying it back. Throws NotCritical or RankAmbiguous.
ReducedPoint reduce_to_canonical(const DataMatrixSVD& X, const FactorPair& p,
                                 double tol);

}  // namespace mfland
