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


#include <gtest/gtest.h>

#include "mfland/calculus.hpp"
#include "mfland/canonical.hpp"
#include "mfland/oracle.hpp"
#include "mfland/random.hpp"
#include "support/test_util.hpp"

namespace mfland {
namespace {

using testing::diag_x;

FactorPair scalar_point() {
  return {MatrixXd::Constant(1, 1, 1.0), MatrixXd::Constant(1, 1, 1.0)};
}

TangentPair scalar_dir(double g, double h) {
  return {MatrixXd::Constant(1, 1, g), MatrixXd::Constant(1, 1, h)};
}

TEST(Gradient, VanishesAtOrigin) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  const TangentPair g =
      gradient(X, {MatrixXd::Zero(3, 2), MatrixXd::Zero(2, 4)});
  EXPECT_EQ(g.norm(), 0.0);
}

TEST(Gradient, RankOneExample) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  FactorPair p{MatrixXd::Zero(3, 1), MatrixXd::Zero(1, 4)};
  p.W(0, 0) = 1.0;
  p.S(0, 0) = 1.0;
  const TangentPair g = gradient(X, p);
  VectorXd gw(3), gs(4);
  gw << -2, 0, 0;
  gs << -2, 0, 0, 0;
  EXPECT_LT((g.G.col(0) - gw).norm(), 1e-15);
  EXPECT_LT((g.H.row(0).transpose() - gs).norm(), 1e-15);
  const FdReport fd = fd_validate(X, p, 8, 1);
  EXPECT_LT(fd.worst_gradient_error, kFdGradientTol);
}

TEST(Gradient, VanishesAtCanonicalPoints) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  for (const auto& sel : {Selection({0, 1}), Selection({0, 2}), Selection({1})}) {
    const CanonicalPoint cp = build_canonical(X, sel, 2, MatrixXd());
    EXPECT_LT(gradient(X, cp.materialize()).norm(), 1e-12);
  }
}

TEST(Hessian, ScalarExampleIsIdentity) {
  const DataMatrixSVD X = load_data_matrix(MatrixXd::Constant(1, 1, 2.0));
  const FactorPair p = scalar_point();
  const TangentPair a = hessian_apply(X, p, scalar_dir(1, 0));
  EXPECT_NEAR(a.G(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(a.H(0, 0), 0.0, 1e-15);
  const TangentPair b = hessian_apply(X, p, scalar_dir(0, 1));
  EXPECT_NEAR(b.G(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(b.H(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(second_derivative(X, p, scalar_dir(1, 0)), 1.0, 1e-15);
  EXPECT_EQ(second_derivative(X, p, scalar_dir(0, 0)), 0.0);
}

TEST(Hessian, ZeroDirectionMapsToZero) {
  Rng rng(2);
  const DataMatrixSVD X = load_data_matrix(random_gaussian(3, 4, rng));
  const FactorPair p{random_gaussian(3, 2, rng), random_gaussian(2, 4, rng)};
  EXPECT_EQ(hessian_apply(X, p, TangentPair::zeros(3, 4, 2)).norm(), 0.0);
}

TEST(CalculusProperty, HessianIsSymmetric) {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4), n = m + 2,
              k = 1 + static_cast<int>(rng() % 3);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, n, rng));
    const FactorPair p{random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
    const TangentPair d1{random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
    const TangentPair d2{random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
    const double lhs = inner(hessian_apply(X, p, d1), d2);
    const double rhs = inner(d1, hessian_apply(X, p, d2));
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
    EXPECT_NEAR(second_derivative(X, p, d1), inner(hessian_apply(X, p, d1), d1),
                1e-10 * std::max(1.0, d1.squared_norm()));
  }
}

TEST(CalculusProperty, FiniteDifferencesAgree) {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4), n = m + 1,
              k = 1 + static_cast<int>(rng() % 3);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, n, rng));
    const FactorPair p{random_gaussian(m, k, rng), random_gaussian(k, n, rng)};
    const FdReport fd = fd_validate(X, p, 16, rng());
    EXPECT_TRUE(fd.passed);
    EXPECT_LT(fd.worst_gradient_error, 1e-6);
    EXPECT_LT(fd.worst_second_error, 1e-4);
  }
}

TEST(CalculusProperty, GradientOrthogonalToOrbitTangents) {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const DataMatrixSVD X = load_data_matrix(random_gaussian(3, 5, rng));
    const FactorPair p{random_gaussian(3, 2, rng), random_gaussian(2, 5, rng)};
    const TangentPair t = orbit_tangent(p, random_gaussian(2, 2, rng));
    const TangentPair g = gradient(X, p);
    EXPECT_NEAR(inner(g, t), 0.0, 1e-12 * g.norm() * t.norm());
  }
}

TEST(CalculusProperty, OrbitTangentIsDegenerateAtCriticalPoints) {
  Rng rng(6);
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  for (const auto& sel : {Selection({0, 1}), Selection({1, 2}), Selection({2})}) {
    const FactorPair p = build_canonical(X, sel, 2, MatrixXd()).materialize();
    const TangentPair d = orbit_tangent(p, random_gaussian(2, 2, rng));
    EXPECT_LT(std::abs(second_derivative(X, p, d)), 1e-10 * d.squared_norm());
  }
}

TEST(Criticality, ZeroFamilyAndCanonicalAreCritical) {
  Rng rng(7);
  const DataMatrixSVD X = diag_x({2, 1}, 2, 3);
  EXPECT_TRUE(is_critical(X, build_zero_family(X, random_gaussian(1, 1, rng)),
                          1e-10));
  EXPECT_TRUE(is_critical(
      X, build_canonical(X, Selection({1}), 1, MatrixXd()).materialize(),
      1e-10));
  EXPECT_FALSE(is_critical(
      X, {random_gaussian(2, 1, rng), random_gaussian(1, 3, rng)}, 1e-10));
  EXPECT_THROW(is_critical(X, build_zero_family(X, MatrixXd::Zero(1, 1)), 0.0),
               InvalidInput);
}

TEST(FiniteDifference, CriticalPointAndDeterminism) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  const FactorPair p =
      build_canonical(X, Selection({0, 2}), 2, MatrixXd()).materialize();
  const FdReport a = fd_validate(X, p, 16, 42);
  const FdReport b = fd_validate(X, p, 16, 42);
  EXPECT_TRUE(a.passed);
  EXPECT_EQ(a.worst_gradient_error, b.worst_gradient_error);
  EXPECT_EQ(a.worst_second_error, b.worst_second_error);
  EXPECT_THROW(fd_validate(X, p, 0, 1), InvalidInput);
}

}  // namespace
}  // namespace mfland
