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

#include "mfland/canonical.hpp"
#include "mfland/core.hpp"

namespace mfland {

/// Where a closed-form eigenpair comes from. Indices are 0-based; `i` names a
/// singular pair of X (or an eigenvector of C0 C0^T for the null-lift family),
/// `j` a column of the factorization. `branch` is -1 / +1 for the two members
/// of a mixed pair and 0 otherwise.
struct Provenance {
  std::string family;
  int i = -1;
  int j = -1;
  int branch = 0;

  std::string to_string() const;
};

struct EigPair {
  double value = 0.0;
  /// Unit norm.
  TangentPair vector;
  Provenance provenance;
  /// The H-to-G ratio of a mixed eigenvector (G, c H), if any.
  std::optional<double> coupling;
};

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;

  int total() const { return positive + negative + zero; }
  bool operator==(const Inertia& o) const {
    return positive == o.positive && negative == o.negative && zero == o.zero;
  }
};

/// Default relative zero threshold for eigenvalue sign counts.
inline constexpr double kDefaultInertiaTol = 1e-8;

/// Counts with |rho| <= rel_tol * max|rho| treated as zero.
Inertia inertia_from_values(const VectorXd& values,
                            double rel_tol = kDefaultInertiaTol);

struct SpectrumReport {
  /// The point the spectrum belongs to (internal orientation).
  FactorPair point;
  std::vector<EigPair> eigpairs;
  Inertia inertia;
  double lambda_min = 0.0;

  /// Eigenvalues sorted ascending.
  VectorXd sorted_values() const;
};

/// Spectrum at (0, C0^T V0^T); C0 is (n - r) x k.
SpectrumReport spectrum_zero_family(const DataMatrixSVD& X, const MatrixXd& C0,
                                    int k);

/// Spectrum at (a W_c, S_c / a) for a selection with q = k.
SpectrumReport spectrum_full_rank_scaled(const DataMatrixSVD& X,
                                         const Selection& sel, double a);

/// Spectrum at a canonical point with q < k.
SpectrumReport spectrum_deficient_rank(const CanonicalPoint& cp);

/// Closed-form spectrum of any canonical point (q = 0, q < k, or q = k).
SpectrumReport spectrum_canonical(const CanonicalPoint& cp);

/// Spectrum at the balanced point of a selection. The negative part is closed
/// form; the rest is computed numerically on the orthogonal complement.
SpectrumReport spectrum_balanced(const DataMatrixSVD& X, const Selection& sel,
                                 int k);

enum class PointFamily { ZeroFamily, Canonical, Balanced };

/// Everything the minimum-eigenvalue formulas depend on.
struct PointDescriptor {
  PointFamily family = PointFamily::Canonical;
  /// Singular values of X, nonincreasing, zeros included.
  VectorXd sigma;
  /// Selected values, nonincreasing. Empty for the zero family.
  VectorXd lambda;
  int k = 0;
  /// Smallest eigenvalue of C0^T C0 (zero family and q < k).
  double omega_min = 0.0;
  /// Scale a of (a W_c, S_c / a); only meaningful when q = k.
  double scale = 1.0;
};

PointDescriptor describe_zero_family(const DataMatrixSVD& X,
                                     const MatrixXd& C0, int k);
PointDescriptor describe_canonical(const CanonicalPoint& cp,
                                   double scale = 1.0);
PointDescriptor describe_balanced(const DataMatrixSVD& X, const Selection& sel,
                                  int k);

/// Closed-form minimum Hessian eigenvalue at a strict saddle. Throws
/// NotASaddle for a global minimum.
double lambda_min_closed_form(const PointDescriptor& d);

/// For q = k: true iff some lambda_p < sigma_p.
bool strict_saddle_test(const DataMatrixSVD& X, const Selection& sel);

/// ||H[v] - rho v|| / ||v|| for every eigenpair. OpenMP-parallel.
std::vector<double> eigpair_residuals(const DataMatrixSVD& X,
                                      const SpectrumReport& report);
/// Serial reference for eigpair_residuals.
std::vector<double> eigpair_residuals_serial(const DataMatrixSVD& X,
                                             const SpectrumReport& report);

/// max_{a != b} |<v_a, v_b>|.
double max_pairwise_overlap(const SpectrumReport& report);

}  // namespace mfland
