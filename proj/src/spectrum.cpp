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

// Closed-form Hessian eigenpairs at canonical points.
//
// Notation used below, all indices 0-based. The point is
// W = [a U_sel 0], S = [Lambda V_sel^T / a; C0^T V0^T] with q selected columns
// and k - q free columns. e_j is the j-th unit vector of R^k. The eigenpairs
// of C0^T C0 are (z_l, omega_l), sorted nonincreasing, and z~_l is z_l placed
// in the free columns. The eigenpairs of C0 C0^T are (y_l, omega'_l).
//
//   selected column j, unselected i, sigma_i > 0:
//       (u_i e_j^T, alpha e_j v_i^T), sigma alpha^2 + (a^2 - lambda_j^2/a^2)
//       alpha - sigma = 0, rho = lambda_j^2/a^2 - alpha sigma_i
//   selected column j, unselected i, sigma_i = 0:
//       (u_i e_j^T, 0), rho = lambda_j^2 / a^2
//   selected columns j, s with lambda_s > 0:
//       (u_j e_s^T, beta e_j v_s^T), beta in {-lambda_s/a^2, a^2/lambda_s},
//       rho in {0, lambda_s^2/a^2 + a^2}
//   selected columns j, s with lambda_s = 0:
//       (u_j e_s^T, 0), rho = 0
//   selected column j, null-space direction y_l:
//       (u_j [0, (C0^T y_l)^T], e_j (V0 y_l)^T), rho = a^2 + omega'_l
//   selected column j, free column l:
//       (u_j z~_l^T, -e_j (V0 C0 z_l)^T), rho = 0
//   free column l, unselected i, sigma_i > 0:
//       (u_i z~_l^T, delta z~_l v_i^T), rho^2 - omega_l rho - sigma_i^2 = 0,
//       delta = -sigma_i / rho
//   free column l, unselected i, sigma_i = 0:
//       (u_i z~_l^T, 0) with rho = omega_l and (0, z~_l v_i^T) with rho = 0
//   free column l, v in {v_i : i >= m} and the selected v's:
//       (0, z~_l v^T), rho = 0

#include "mfland/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "mfland/calculus.hpp"
#include "mfland/oracle.hpp"

namespace mfland {

std::string Provenance::to_string() const {
  std::ostringstream out;
  out << family;
  if (i >= 0 || j >= 0) {
    out << "(";
    if (i >= 0) out << "i=" << i + 1;
    if (i >= 0 && j >= 0) out << ",";
    if (j >= 0) out << "j=" << j + 1;
    if (branch != 0) out << (branch < 0 ? ",-" : ",+");
    out << ")";
  }
  return out.str();
}

Inertia inertia_from_values(const VectorXd& values, double rel_tol) {
  Inertia out;
  if (values.size() == 0) return out;
  const double thr = rel_tol * values.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) > thr) {
      ++out.positive;
    } else if (values(i) < -thr) {
      ++out.negative;
    } else {
      ++out.zero;
    }
  }
  return out;
}

VectorXd SpectrumReport::sorted_values() const {
  VectorXd v(eigpairs.size());
  for (std::size_t i = 0; i < eigpairs.size(); ++i) v(i) = eigpairs[i].value;
  std::sort(v.data(), v.data() + v.size());
  return v;
}

namespace {

class PairCollector {
 public:
  explicit PairCollector(std::vector<EigPair>* out) : out_(out) {}

  void add(double value, MatrixXd G, MatrixXd H, Provenance prov,
           std::optional<double> coupling = std::nullopt) {
    TangentPair v{std::move(G), std::move(H)};
    const double norm = v.norm();
    out_->push_back({value, (1.0 / norm) * v, std::move(prov), coupling});
  }

 private:
  std::vector<EigPair>* out_;
};

// Eigenpairs of a symmetric matrix, sorted nonincreasing.
void sorted_eigen(const MatrixXd& M, VectorXd* values, MatrixXd* vectors) {
  if (M.size() == 0) {
    *values = VectorXd();
    *vectors = MatrixXd(M.rows(), 0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("eigendecomposition of the null-space block failed");
  }
  *values = es.eigenvalues().reverse().cwiseMax(0.0);
  *vectors = es.eigenvectors().rowwise().reverse();
}

void finalize(SpectrumReport* report) {
  const VectorXd values = report->sorted_values();
  report->inertia = inertia_from_values(values);
  report->lambda_min = values.size() ? values(0) : 0.0;
}

SpectrumReport canonical_spectrum(const DataMatrixSVD& X, const Selection& sel,
                                  int k, const MatrixXd& C0, double a) {
  const int m = X.m();
  const int n = X.n();
  const int r = X.rank();
  const int q = sel.q();
  const int free = k - q;
  const MatrixXd& U = X.U();
  const MatrixXd& V = X.V();
  const MatrixXd V0 = X.V0();
  const VectorXd lambda = sel.values(X);
  const double a2 = a * a;

  SpectrumReport report;
  report.point = {MatrixXd::Zero(m, k), MatrixXd::Zero(k, n)};
  for (int j = 0; j < q; ++j) {
    const int i = sel.indices()[j];
    report.point.W.col(j) = a * U.col(i);
    report.point.S.row(j) = (lambda(j) / a) * V.col(i).transpose();
  }
  if (free > 0) report.point.S.bottomRows(free) = C0.transpose() * V0.transpose();

  VectorXd omega, omega_null;
  MatrixXd Z, Y;
  sorted_eigen(C0.transpose() * C0, &omega, &Z);
  sorted_eigen(C0 * C0.transpose(), &omega_null, &Y);

  auto unit = [k](int j) {
    VectorXd e = VectorXd::Zero(k);
    e(j) = 1.0;
    return e;
  };
  auto free_dir = [&](int l) {
    VectorXd z = VectorXd::Zero(k);
    z.tail(free) = Z.col(l);
    return z;
  };

  report.eigpairs.reserve(static_cast<std::size_t>(k) * (m + n));
  PairCollector add(&report.eigpairs);

  for (int j = 0; j < q; ++j) {
    const VectorXd ej = unit(j);
    const VectorXd uj = U.col(sel.indices()[j]);
    const double lj2 = lambda(j) * lambda(j);

    for (int i = 0; i < m; ++i) {
      if (sel.contains(i)) continue;
      const double s = X.sigma_at(i);
      if (s > 0.0) {
        // Roots of s alpha^2 + (a^2 - lj2/a^2) alpha - s = 0; alpha+ alpha- = -1.
        const double c = (lj2 - a2 * a2) / a2;
        const double root = std::hypot(c, 2.0 * s);
        double alpha_hi, alpha_lo;
        if (c >= 0.0) {
          alpha_hi = (c + root) / (2.0 * s);
          alpha_lo = -1.0 / alpha_hi;
        } else {
          alpha_lo = (c - root) / (2.0 * s);
          alpha_hi = -1.0 / alpha_lo;
        }
        const double rho_hi = 0.5 * ((lj2 + a2 * a2) / a2 + root);
        const double rho_lo = (lj2 - s * s) / rho_hi;
        add.add(rho_lo, U.col(i) * ej.transpose(),
                alpha_hi * ej * V.col(i).transpose(),
                {"unselected-mixed", i, j, -1}, alpha_hi);
        add.add(rho_hi, U.col(i) * ej.transpose(),
                alpha_lo * ej * V.col(i).transpose(),
                {"unselected-mixed", i, j, +1}, alpha_lo);
      } else {
        add.add(lj2 / a2, U.col(i) * ej.transpose(), MatrixXd::Zero(k, n),
                {"unselected-null", i, j, 0});
      }
    }

    for (int s = 0; s < q; ++s) {
      const VectorXd es = unit(s);
      const double ls = lambda(s);
      const VectorXd vs = V.col(sel.indices()[s]);
      if (ls > 0.0) {
        const double beta_lo = -ls / a2;
        const double beta_hi = a2 / ls;
        add.add(0.0, uj * es.transpose(), beta_lo * ej * vs.transpose(),
                {"selected-pair", s, j, -1}, beta_lo);
        add.add(ls * ls / a2 + a2, uj * es.transpose(),
                beta_hi * ej * vs.transpose(), {"selected-pair", s, j, +1},
                beta_hi);
      } else {
        add.add(0.0, uj * es.transpose(), MatrixXd::Zero(k, n),
                {"selected-null", s, j, 0});
      }
    }

    for (int l = 0; l < n - r; ++l) {
      VectorXd row = VectorXd::Zero(k);
      if (free > 0) row.tail(free) = C0.transpose() * Y.col(l);
      add.add(a2 + omega_null(l), uj * row.transpose(),
              ej * (V0 * Y.col(l)).transpose(), {"null-lift", l, j, 0});
    }

    for (int l = 0; l < free; ++l) {
      add.add(0.0, uj * free_dir(l).transpose(),
              -ej * (V0 * (C0 * Z.col(l))).transpose(),
              {"null-coupled", q + l, j, 0});
    }
  }

  for (int l = 0; l < free; ++l) {
    const VectorXd zl = free_dir(l);
    const double w = omega(l);
    for (int i = 0; i < m; ++i) {
      if (sel.contains(i)) continue;
      const double s = X.sigma_at(i);
      if (s > 0.0) {
        const double rho_hi = 0.5 * w + std::hypot(s, 0.5 * w);
        const double rho_lo = -s * s / rho_hi;
        const double delta_lo = -s / rho_lo;
        const double delta_hi = -s / rho_hi;
        add.add(rho_lo, U.col(i) * zl.transpose(),
                delta_lo * zl * V.col(i).transpose(),
                {"free-mixed", i, q + l, -1}, delta_lo);
        add.add(rho_hi, U.col(i) * zl.transpose(),
                delta_hi * zl * V.col(i).transpose(),
                {"free-mixed", i, q + l, +1}, delta_hi);
      } else {
        add.add(w, U.col(i) * zl.transpose(), MatrixXd::Zero(k, n),
                {"free-null-left", i, q + l, 0});
        add.add(0.0, MatrixXd::Zero(m, k), zl * V.col(i).transpose(),
                {"free-null-right", i, q + l, 0});
      }
    }
    for (int i = m; i < n; ++i) {
      add.add(0.0, MatrixXd::Zero(m, k), zl * V.col(i).transpose(),
              {"free-right", i, q + l, 0});
    }
    for (int s = 0; s < q; ++s) {
      add.add(0.0, MatrixXd::Zero(m, k),
              zl * V.col(sel.indices()[s]).transpose(),
              {"free-selected", sel.indices()[s], q + l, 0});
    }
  }

  finalize(&report);
  return report;
}

void check_selection_fits(const DataMatrixSVD& X, const Selection& sel,
                          int k) {
  sel.validate(X);
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (sel.q() > std::min(k, X.m())) {
    throw InvalidSelection("q exceeds min(k, m)");
  }
}

}  // namespace

SpectrumReport spectrum_zero_family(const DataMatrixSVD& X, const MatrixXd& C0,
                                    int k) {
  if (k < 1) throw InvalidInput("k must be at least 1");
  if (C0.rows() != X.n() - X.rank() || C0.cols() != k) {
    throw DimensionError("zero-family block must be (n - r) x k");
  }
  return canonical_spectrum(X, Selection(), k, C0, 1.0);
}

SpectrumReport spectrum_full_rank_scaled(const DataMatrixSVD& X,
                                         const Selection& sel, double a) {
  const int k = sel.q();
  if (k < 1) throw InvalidSelection("full-rank spectrum needs q = k >= 1");
  check_selection_fits(X, sel, k);
  if (!(a != 0.0 && std::isfinite(a))) {
    throw InvalidInput("scale must be finite and nonzero");
  }
  return canonical_spectrum(X, sel, k, MatrixXd::Zero(X.n() - X.rank(), 0),
                            a);
}

SpectrumReport spectrum_deficient_rank(const CanonicalPoint& cp) {
  if (cp.q() >= cp.k) {
    throw InvalidSelection("q = k: use spectrum_full_rank_scaled");
  }
  check_selection_fits(cp.basis, cp.selection, cp.k);
  return canonical_spectrum(cp.basis, cp.selection, cp.k, cp.C0, 1.0);
}

SpectrumReport spectrum_canonical(const CanonicalPoint& cp) {
  if (cp.q() == cp.k) {
    return spectrum_full_rank_scaled(cp.basis, cp.selection, 1.0);
  }
  return spectrum_deficient_rank(cp);
}

SpectrumReport spectrum_balanced(const DataMatrixSVD& X, const Selection& sel,
                                 int k) {
  check_selection_fits(X, sel, k);
  const int m = X.m();
  const int n = X.n();
  const int r = X.rank();
  const int q = sel.q();
  const VectorXd lambda = sel.values(X);
  const double tol = X.value_tolerance();

  SpectrumReport report;
  report.point = build_balanced(X, sel, k);
  PairCollector add(&report.eigpairs);
  const MatrixXd& U = X.U();
  const MatrixXd& V = X.V();

  for (int j = 0; j < k; ++j) {
    VectorXd ej = VectorXd::Zero(k);
    ej(j) = 1.0;
    for (int i = 0; i < r; ++i) {
      if (sel.contains(i)) continue;
      const double s = X.sigma_at(i);
      if (j < q && lambda(j) < s - tol) {
        add.add(lambda(j) - s, U.col(i) * ej.transpose(),
                ej * V.col(i).transpose(), {"balanced-gap", i, j, 0});
      } else if (j >= q) {
        add.add(-s, U.col(i) * ej.transpose(), ej * V.col(i).transpose(),
                {"balanced-free", i, j, 0});
      }
    }
  }

  // The closed-form vectors span an invariant subspace; the rest of the
  // spectrum lives on its orthogonal complement.
  const int dim = k * (m + n);
  const int known = static_cast<int>(report.eigpairs.size());
  MatrixXd B(dim, known);
  for (int c = 0; c < known; ++c) B.col(c) = flatten(report.eigpairs[c].vector);
  MatrixXd complement;
  if (known == 0) {
    complement = MatrixXd::Identity(dim, dim);
  } else {
    Eigen::HouseholderQR<MatrixXd> qr(B);
    const MatrixXd Q = qr.householderQ() * MatrixXd::Identity(dim, dim);
    complement = Q.rightCols(dim - known);
  }
  const DenseHessian h = dense_hessian(X, report.point);
  MatrixXd reduced = complement.transpose() * h.matrix * complement;
  reduced = 0.5 * (reduced + reduced.transpose());
  const NumericSpectrum ns = numeric_spectrum(reduced, true);
  for (int c = 0; c < dim - known; ++c) {
    const TangentPair v = unflatten(complement * ns.vectors.col(c), m, n, k);
    add.add(ns.values(c), v.G, v.H, {"complement", -1, -1, 0});
    report.eigpairs.back().provenance.i = c;
  }

  finalize(&report);
  return report;
}

PointDescriptor describe_zero_family(const DataMatrixSVD& X, const MatrixXd& C0,
                                     int k) {
  PointDescriptor d;
  d.family = PointFamily::ZeroFamily;
  d.sigma = X.sigma();
  d.k = k;
  if (C0.size() > 0) {
    VectorXd omega;
    MatrixXd Z;
    sorted_eigen(C0.transpose() * C0, &omega, &Z);
    d.omega_min = omega(omega.size() - 1);
  }
  return d;
}

PointDescriptor describe_canonical(const CanonicalPoint& cp, double scale) {
  PointDescriptor d;
  if (cp.q() == 0) {
    d = describe_zero_family(cp.basis, cp.C0, cp.k);
    d.family = PointFamily::Canonical;
    return d;
  }
  d.family = PointFamily::Canonical;
  d.sigma = cp.basis.sigma();
  d.lambda = cp.lambda();
  d.k = cp.k;
  d.scale = scale;
  if (cp.q() < cp.k && cp.C0.size() > 0) {
    VectorXd omega;
    MatrixXd Z;
    sorted_eigen(cp.C0.transpose() * cp.C0, &omega, &Z);
    d.omega_min = omega(omega.size() - 1);
  }
  return d;
}

PointDescriptor describe_balanced(const DataMatrixSVD& X, const Selection& sel,
                                  int k) {
  PointDescriptor d;
  d.family = PointFamily::Balanced;
  d.sigma = X.sigma();
  d.lambda = sel.values(X);
  d.k = k;
  return d;
}

namespace {

// w/2 - sqrt(s^2 + w^2/4) without cancellation.
double free_mixed_min(double s, double w) {
  return -s * s / (0.5 * w + std::hypot(s, 0.5 * w));
}

// 1/2 (c - d) with c = (l^2 + a^4)/a^2, d = sqrt(((l^2 - a^4)/a^2)^2 + 4 s^2),
// written as 2 (l^2 - s^2) / (c + d).
double selected_mixed_min(double l, double s, double a) {
  const double a2 = a * a;
  const double c = (l * l + a2 * a2) / a2;
  const double d = std::hypot((l * l - a2 * a2) / a2, 2.0 * s);
  return 2.0 * (l * l - s * s) / (c + d);
}

}  // namespace

double lambda_min_closed_form(const PointDescriptor& d) {
  const int m = static_cast<int>(d.sigma.size());
  const int q = static_cast<int>(d.lambda.size());
  if (m == 0 || d.sigma(0) <= 0.0) throw InvalidInput("empty spectrum of X");
  if (d.k < 1 || q > std::min(d.k, m)) {
    throw InvalidSelection("descriptor selection does not fit k");
  }
  auto sigma_at = [&](int i) { return i < m ? d.sigma(i) : 0.0; };
  const double tol = kValueRelTol * d.sigma(0);

  if (q == 0) {
    if (d.family == PointFamily::Balanced) {
      return -d.sigma(0);
    }
    return free_mixed_min(d.sigma(0), d.omega_min);
  }

  std::optional<int> p;
  for (int j = 0; j < q; ++j) {
    if (d.lambda(j) < d.sigma(j) - tol) {
      p = j;
      break;
    }
  }
  const bool maximal = !p.has_value();
  const double next = sigma_at(q);
  if (q == m || (maximal && (q == d.k || next <= tol))) {
    throw NotASaddle("descriptor is a global minimum");
  }
  const double lambda_last = d.lambda(q - 1);

  if (d.family == PointFamily::Balanced) {
    if (q == d.k) return -(d.sigma(*p) - lambda_last);
    return maximal ? -next : -d.sigma(*p);
  }

  if (q == d.k) return selected_mixed_min(lambda_last, d.sigma(*p), d.scale);
  if (d.scale != 1.0) {
    throw InvalidInput("scaling is only defined for q = k");
  }
  if (maximal) return free_mixed_min(next, d.omega_min);
  const double sp = d.sigma(*p);
  return std::min(free_mixed_min(sp, d.omega_min),
                  selected_mixed_min(lambda_last, sp, 1.0));
}

bool strict_saddle_test(const DataMatrixSVD& X, const Selection& sel) {
  return first_deficit(X, sel).has_value();
}

namespace {

double residual_of(const DataMatrixSVD& X, const FactorPair& p,
                   const EigPair& e) {
  const TangentPair hv = hessian_apply(X, p, e.vector);
  return (hv - e.value * e.vector).norm() / e.vector.norm();
}

}  // namespace

std::vector<double> eigpair_residuals(const DataMatrixSVD& X,
                                      const SpectrumReport& report) {
  const int count = static_cast<int>(report.eigpairs.size());
  std::vector<double> out(count);
#pragma omp parallel for schedule(dynamic, 4)
  for (int c = 0; c < count; ++c) {
    out[c] = residual_of(X, report.point, report.eigpairs[c]);
  }
  return out;
}

std::vector<double> eigpair_residuals_serial(const DataMatrixSVD& X,
                                             const SpectrumReport& report) {
  std::vector<double> out;
  out.reserve(report.eigpairs.size());
  for (const EigPair& e : report.eigpairs) {
    out.push_back(residual_of(X, report.point, e));
  }
  return out;
}

double max_pairwise_overlap(const SpectrumReport& report) {
  const int count = static_cast<int>(report.eigpairs.size());
  if (count < 2) return 0.0;
  MatrixXd B(flatten(report.eigpairs[0].vector).size(), count);
  for (int c = 0; c < count; ++c) B.col(c) = flatten(report.eigpairs[c].vector);
  MatrixXd gram = B.transpose() * B;
  gram.diagonal().setZero();
  return gram.cwiseAbs().maxCoeff();
}

}  // namespace mfland
