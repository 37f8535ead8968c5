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

#include "mfland/random.hpp"
#include "mfland/verify.hpp"
#include "support/test_util.hpp"

namespace mfland {
namespace {

void expect_suite_passes(const DataMatrixSVD& X, std::uint64_t seed) {
  VerifyOptions opt;
  opt.seed = seed;
  const VerifyReport rep = run_property_suite(X, opt);
  for (const CheckResult& c : rep.checks) {
    EXPECT_TRUE(c.passed()) << c.name << ": worst " << c.worst << " > "
                            << c.limit << " " << c.note;
  }
  EXPECT_TRUE(rep.passed());
}

TEST(PropertySuite, RandomWideMatrices) {
  Rng rng(1);
  for (int trial = 0; trial < 4; ++trial) {
    const int m = 2 + trial;
    expect_suite_passes(load_data_matrix(random_gaussian(m, m + 2, rng)),
                        100 + trial);
  }
}

TEST(PropertySuite, TallMatrixIsTransposed) {
  Rng rng(2);
  const DataMatrixSVD X = load_data_matrix(random_gaussian(5, 3, rng));
  ASSERT_TRUE(X.transposed());
  expect_suite_passes(X, 5);
}

TEST(PropertySuite, RankDeficientAndRepeatedValues) {
  Rng rng(3);
  expect_suite_passes(
      load_data_matrix(matrix_with_singular_values(testing::vec({3, 2, 0}), 3, 5, rng)),
      6);
  expect_suite_passes(
      load_data_matrix(matrix_with_singular_values(testing::vec({2, 2, 1}), 3, 4, rng)),
      7);
  expect_suite_passes(testing::diag_x({3, 2, 1}, 3, 4), 8);
}

TEST(PropertySuite, ReportLookupAndCoverage) {
  Rng rng(4);
  const VerifyReport rep =
      run_property_suite(load_data_matrix(random_gaussian(3, 4, rng)));
  for (const char* name :
       {"calculus.fd_gradient", "calculus.hessian_symmetry",
        "orbit.J_invariance", "orbit.gradient_transport",
        "orbit.hessian_transport", "orbit.second_derivative_transport",
        "orbit.inertia_invariance", "orbit.bound_validity",
        "orbit.M0_orthogonal_closure", "oracle.congruence",
        "canonical.round_trip", "spectrum.oracle_agreement",
        "spectrum.eigen_residual", "spectrum.orthogonality",
        "spectrum.coupling_products", "spectrum.sign_trichotomy",
        "spectrum.scaling_monotone", "flow.conservation", "flow.descent"}) {
    const CheckResult* c = rep.find(name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_GT(c->cases, 0) << name;
  }
  EXPECT_EQ(rep.find("no.such.check"), nullptr);
}

TEST(CheckResult, PassIsWorstWithinLimit) {
  CheckResult c{"x", 1e-9, 1e-8, 3, ""};
  EXPECT_TRUE(c.passed());
  c.worst = 2e-8;
  EXPECT_FALSE(c.passed());
  VerifyReport rep;
  rep.checks.push_back(c);
  EXPECT_FALSE(rep.passed());
}

}  // namespace
}  // namespace mfland
