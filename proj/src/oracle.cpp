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

#include "mfland/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "mfland/calculus.hpp"

namespace mfland {

VectorXd flatten(const TangentPair& d) {
  VectorXd v(d.G.size() + d.H.size());
  v.head(d.G.size()) = Eigen::Map<const VectorXd>(d.G.data(), d.G.size());
  v.tail(d.H.size()) = Eigen::Map<const VectorXd>(d.H.data(), d.H.size());
  return v;
}

TangentPair unflatten(const VectorXd& v, int m, int n, int k) {
  if (v.size() != static_cast<Eigen::Index>(k) * (m + n)) {
    throw DimensionError("coordinate vector length is not k(m+n)");
  }
  TangentPair d;
  d.G = Eigen::Map<const MatrixXd>(v.data(), m, k);
  d.H = Eigen::Map<const MatrixXd>(v.data() + m * k, k, n);
  return d;
}

namespace {

struct Workspace {
  MatrixXd W, S, E, SSt, WtW;
};

Workspace prepare(const DataMatrixSVD& X, const FactorPair& p) {
  check_dimensions(X, p);
  const long dim = static_cast<long>(p.k()) * (X.m() + X.n());
  if (dim > kMaxDenseDimension) {
    throw TooLarge("k(m+n) = " + std::to_string(dim) + " exceeds " +
                   std::to_string(kMaxDenseDimension));
  }
  return {p.W, p.S, p.W * p.S - X.X(), p.S * p.S.transpose(),
          p.W.transpose() * p.W};
}

// Hessian applied to the c-th coordinate direction, written into `col`.
void hessian_column(const Workspace& ws, int m, int n, int k, int c,
                    Eigen::Ref<VectorXd> col) {
  MatrixXd G = MatrixXd::Zero(m, k);
  MatrixXd H = MatrixXd::Zero(k, n);
  if (c < m * k) {
    G(c % m, c / m) = 1.0;
  } else {
    const int h = c - m * k;
    H(h % k, h / k) = 1.0;
  }
  const MatrixXd outG = G * ws.SSt + (ws.W * H) * ws.S.transpose() +
                        ws.E * H.transpose();
  const MatrixXd outH = ws.WtW * H + ws.W.transpose() * (G * ws.S) +
                        G.transpose() * ws.E;
  col.head(m * k) = Eigen::Map<const VectorXd>(outG.data(), m * k);
  col.tail(k * n) = Eigen::Map<const VectorXd>(outH.data(), k * n);
}

DenseHessian finish(MatrixXd M, int m, int n, int k) {
  DenseHessian h;
  const double norm = M.norm();
  h.asymmetry = norm > 0.0 ? (M - M.transpose()).norm() / norm : 0.0;
  h.matrix = 0.5 * (M + M.transpose());
  h.m = m;
  h.n = n;
  h.k = k;
  return h;
}

}  // namespace

DenseHessian dense_hessian(const DataMatrixSVD& X, const FactorPair& p) {
  const Workspace ws = prepare(X, p);
  const int m = X.m(), n = X.n(), k = p.k();
  const int dim = k * (m + n);
  MatrixXd M(dim, dim);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < dim; ++c) {
    hessian_column(ws, m, n, k, c, M.col(c));
  }
  return finish(std::move(M), m, n, k);
}

DenseHessian dense_hessian_serial(const DataMatrixSVD& X, const FactorPair& p) {
  const Workspace ws = prepare(X, p);
  const int m = X.m(), n = X.n(), k = p.k();
  const int dim = k * (m + n);
  MatrixXd M(dim, dim);
  for (int c = 0; c < dim; ++c) {
    hessian_column(ws, m, n, k, c, M.col(c));
  }
  return finish(std::move(M), m, n, k);
}

NumericSpectrum numeric_spectrum(const MatrixXd& symmetric, bool with_vectors) {
  NumericSpectrum out;
  if (symmetric.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(
      symmetric, with_vectors ? Eigen::ComputeEigenvectors
                              : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalFailure("symmetric eigensolver did not converge");
  }
  out.values = es.eigenvalues();
  if (with_vectors) {
    out.vectors = es.eigenvectors();
    const double norm = std::max(symmetric.norm(), 1e-300);
    out.residual = (symmetric * out.vectors -
                    out.vectors * out.values.asDiagonal())
                       .norm() /
                   norm;
  }
  return out;
}

NumericSpectrum numeric_spectrum(const DenseHessian& h, bool with_vectors) {
  return numeric_spectrum(h.matrix, with_vectors);
}

MatrixXd action_matrix(const MatrixXd& B, const MatrixXd& B_inv, int m,
                       int n) {
  const int k = static_cast<int>(B.rows());
  const int dim = k * (m + n);
  MatrixXd out(dim, dim);
  for (int c = 0; c < dim; ++c) {
    VectorXd e = VectorXd::Zero(dim);
    e(c) = 1.0;
    const TangentPair d = unflatten(e, m, n, k);
    out.col(c) = flatten({d.G * B, B_inv * d.H});
  }
  return out;
}

FdReport fd_validate(const DataMatrixSVD& X, const FactorPair& p, int trials,
                     std::uint64_t seed) {
  if (trials < 1) throw InvalidInput("fd_validate needs at least one trial");
  check_dimensions(X, p);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int m = X.m(), n = X.n(), k = p.k();
  const TangentPair grad = gradient(X, p);
  const double J0 = evaluate_J(X, p);

  FdReport report;
  report.trials = trials;
  for (int t = 0; t < trials; ++t) {
    TangentPair d = TangentPair::zeros(m, n, k);
    for (Eigen::Index i = 0; i < d.G.size(); ++i) d.G.data()[i] = normal(rng);
    for (Eigen::Index i = 0; i < d.H.size(); ++i) d.H.data()[i] = normal(rng);
    d = (1.0 / d.norm()) * d;

    auto shifted = [&](double s) {
      return evaluate_J(X, {p.W + s * d.G, p.S + s * d.H});
    };
    const double h1 = kFdGradientStep;
    const double fd1 = (shifted(h1) - shifted(-h1)) / (2.0 * h1);
    const double an1 = inner(grad, d);
    report.worst_gradient_error =
        std::max(report.worst_gradient_error,
                 std::abs(fd1 - an1) / std::max(std::abs(an1), 1.0));

    const double h2 = kFdSecondStep;
    const double fd2 = (shifted(h2) - 2.0 * J0 + shifted(-h2)) / (h2 * h2);
    const double an2 = second_derivative(X, p, d);
    report.worst_second_error =
        std::max(report.worst_second_error,
                 std::abs(fd2 - an2) / std::max(std::abs(an2), 1.0));
  }
  report.passed = report.worst_gradient_error < kFdGradientTol &&
                  report.worst_second_error < kFdSecondTol;
  return report;
}

}  // namespace mfland
