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

#include <map>
#include <tuple>

#include "mfland/canonical.hpp"
#include "mfland/oracle.hpp"
#include "mfland/random.hpp"
#include "mfland/spectrum.hpp"
#include "support/test_util.hpp"

namespace mfland {
namespace {

using testing::diag_x;
using testing::max_abs_diff;
using testing::oracle_values;
using testing::sorted;
using testing::vec;

void expect_matches_oracle(const DataMatrixSVD& X, const SpectrumReport& rep,
                           double tol = 1e-8) {
  const int dim = rep.point.k() * (X.m() + X.n());
  ASSERT_EQ(static_cast<int>(rep.eigpairs.size()), dim);
  const VectorXd oracle = oracle_values(X, rep.point);
  EXPECT_LT(max_abs_diff(rep.sorted_values(), oracle), tol);
  EXPECT_NEAR(rep.lambda_min, oracle(0), tol);
}

void expect_valid_eigpairs(const DataMatrixSVD& X, const SpectrumReport& rep) {
  for (double r : eigpair_residuals(X, rep)) EXPECT_LE(r, 1e-9);
  EXPECT_LE(max_pairwise_overlap(rep), 1e-9);
}

TEST(ZeroFamilySpectrum, Examples) {
  const DataMatrixSVD X = diag_x({2, 1}, 2, 3);
  const SpectrumReport a = spectrum_zero_family(X, MatrixXd::Zero(1, 1), 1);
  EXPECT_LT(max_abs_diff(a.sorted_values(), vec({-2, -1, 0, 1, 2})), 1e-14);
  EXPECT_DOUBLE_EQ(a.lambda_min, -2.0);
  expect_matches_oracle(X, a);

  const SpectrumReport b =
      spectrum_zero_family(X, MatrixXd::Constant(1, 1, std::sqrt(3.0)), 1);
  EXPECT_NEAR(b.lambda_min, 1.5 - std::sqrt(4.0 + 2.25), 1e-14);
  EXPECT_NEAR(b.lambda_min, -1.0, 1e-14);
  expect_matches_oracle(X, b);
  EXPECT_EQ(b.eigpairs.size(), 5u);
}

TEST(FullRankSpectrum, Examples) {
  const DataMatrixSVD X = diag_x({2, 1}, 2, 3);
  const SpectrumReport a = spectrum_full_rank_scaled(X, Selection({1}), 1.0);
  EXPECT_LT(max_abs_diff(a.sorted_values(), vec({-1, 0, 1, 2, 3})), 1e-14);
  EXPECT_DOUBLE_EQ(a.lambda_min, -1.0);
  EXPECT_EQ(a.inertia, (Inertia{3, 1, 1}));
  expect_matches_oracle(X, a);

  const SpectrumReport b = spectrum_full_rank_scaled(X, Selection({0}), 1.0);
  EXPECT_GE(b.sorted_values()(0), -1e-14);
  expect_matches_oracle(X, b);

  const SpectrumReport c = spectrum_full_rank_scaled(X, Selection({1}), 2.0);
  EXPECT_NEAR(c.lambda_min, -0.61646, 1e-5);
  expect_matches_oracle(X, c);
}

TEST(FullRankSpectrum, RejectsBadArguments) {
  const DataMatrixSVD X = diag_x({2, 1}, 2, 3);
  EXPECT_THROW(spectrum_full_rank_scaled(X, Selection(), 1.0), InvalidSelection);
  EXPECT_THROW(spectrum_full_rank_scaled(X, Selection({1}), 0.0), InvalidInput);
}

TEST(DeficientRankSpectrum, Examples) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  const SpectrumReport a = spectrum_deficient_rank(
      build_canonical(X, Selection({0}), 2, MatrixXd::Zero(1, 1)));
  EXPECT_NEAR(a.lambda_min, -2.0, 1e-14);
  EXPECT_EQ(a.eigpairs.size(), 14u);
  expect_matches_oracle(X, a);

  const SpectrumReport b = spectrum_deficient_rank(
      build_canonical(X, Selection({1}), 2, MatrixXd::Zero(1, 1)));
  EXPECT_NEAR(b.lambda_min, -3.0, 1e-14);
  EXPECT_EQ(b.eigpairs.size(), 14u);
  expect_matches_oracle(X, b);

  EXPECT_THROW(spectrum_deficient_rank(
                   build_canonical(X, Selection({0, 1}), 2, MatrixXd())),
               InvalidSelection);
}

TEST(BalancedSpectrum, Examples) {
  const DataMatrixSVD Y = diag_x({2, 1}, 2, 3);
  const SpectrumReport a = spectrum_balanced(Y, Selection({1}), 1);
  EXPECT_NEAR(a.lambda_min, -1.0, 1e-12);
  expect_matches_oracle(Y, a);

  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  const SpectrumReport b = spectrum_balanced(X, Selection({0}), 2);
  EXPECT_NEAR(b.lambda_min, -2.0, 1e-12);
  expect_matches_oracle(X, b);
  const SpectrumReport c = spectrum_balanced(X, Selection({1}), 2);
  EXPECT_NEAR(c.lambda_min, -3.0, 1e-12);
  expect_matches_oracle(X, c);
}

TEST(ClosedFormLambdaMin, Examples) {
  const DataMatrixSVD Y = diag_x({2, 1}, 2, 3);
  const CanonicalPoint cp = build_canonical(Y, Selection({1}), 1, MatrixXd());
  const double s = 2.0, l = 1.0;
  const double expected =
      -(s * s - l * l) /
      ((l * l + 1) / 2 + std::sqrt(s * s + std::pow((l * l - 1) / 2, 2)));
  EXPECT_NEAR(lambda_min_closed_form(describe_canonical(cp)), expected, 1e-15);
  EXPECT_NEAR(expected, -1.0, 1e-15);

  PointDescriptor zero;
  zero.family = PointFamily::ZeroFamily;
  zero.sigma = vec({2.0, 1.0});
  zero.k = 1;
  zero.omega_min = 3.0;
  EXPECT_NEAR(lambda_min_closed_form(zero), -1.0, 1e-15);

  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  EXPECT_NEAR(lambda_min_closed_form(describe_balanced(X, Selection({1}), 2)),
              -3.0, 1e-15);
  EXPECT_THROW(lambda_min_closed_form(describe_canonical(
                   build_canonical(X, Selection({0, 1}), 2, MatrixXd()))),
               NotASaddle);
}

TEST(StrictSaddleTest, Examples) {
  const DataMatrixSVD X = diag_x({3, 2, 1}, 3, 4);
  EXPECT_FALSE(strict_saddle_test(X, Selection({0, 1})));
  EXPECT_TRUE(strict_saddle_test(X, Selection({0, 2})));
  const DataMatrixSVD R = diag_x({2, 2, 1}, 3, 4);
  EXPECT_FALSE(strict_saddle_test(R, Selection({0, 1})));
}

TEST(Inertia, ThresholdIsRelative) {
  const Inertia in = inertia_from_values(vec({-2, -1e-12, 0, 1e-9, 3}));
  EXPECT_EQ(in, (Inertia{1, 1, 3}));
}

struct RandomCase {
  DataMatrixSVD X;
  CanonicalPoint cp;
};

RandomCase random_case(Rng& rng, bool allow_c0) {
  const int m = 2 + static_cast<int>(rng() % 5);
  const int n = m + 1 + static_cast<int>(rng() % (9 - m));
  const int k = 1 + static_cast<int>(rng() % m);
  DataMatrixSVD X = load_data_matrix(random_gaussian(m, n, rng));
  const int q = static_cast<int>(rng() % (k + 1));
  const Selection sel = testing::random_selection(m, q, rng);
  const MatrixXd C0 = allow_c0 && (rng() % 2) ? random_gaussian(n - m, k - q, rng)
                                              : MatrixXd::Zero(n - m, k - q);
  CanonicalPoint cp = build_canonical(X, sel, k, C0);
  return {X, cp};
}

TEST(SpectrumProperty, CanonicalSpectraMatchOracle) {
  Rng rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const RandomCase c = random_case(rng, true);
    const SpectrumReport rep = spectrum_canonical(c.cp);
    expect_matches_oracle(c.X, rep);
    expect_valid_eigpairs(c.X, rep);
    const auto cls = classify_canonical(c.cp);
    if (cls.lambda_min_closed_form) {
      EXPECT_NEAR(*cls.lambda_min_closed_form, rep.lambda_min, 1e-10);
    } else {
      EXPECT_GE(rep.lambda_min, -1e-10);
    }
  }
}

TEST(SpectrumProperty, ScaledSpectraMatchOracle) {
  Rng rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, m + 2, rng));
    const int k = 1 + static_cast<int>(rng() % m);
    const Selection sel = testing::random_selection(m, k, rng);
    std::uniform_real_distribution<double> la(-2.0, 2.0);
    const double a = std::exp(la(rng)) * (rng() % 2 ? 1.0 : -1.0);
    const SpectrumReport rep = spectrum_full_rank_scaled(X, sel, a);
    expect_matches_oracle(X, rep);
    expect_valid_eigpairs(X, rep);
    const CanonicalPoint cp = build_canonical(X, sel, k, MatrixXd());
    if (strict_saddle_test(X, sel)) {
      EXPECT_NEAR(lambda_min_closed_form(describe_canonical(cp, a)),
                  rep.lambda_min, 1e-10);
    }
  }
}

TEST(SpectrumProperty, ZeroFamilySpectraMatchOracle) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const int n = m + 1 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % 3);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, n, rng));
    const MatrixXd C0 = random_gaussian(n - m, k, rng);
    const SpectrumReport rep = spectrum_zero_family(X, C0, k);
    expect_matches_oracle(X, rep);
    expect_valid_eigpairs(X, rep);
    EXPECT_NEAR(lambda_min_closed_form(describe_zero_family(X, C0, k)),
                rep.lambda_min, 1e-10);
  }
}

TEST(SpectrumProperty, BalancedSpectraMatchOracle) {
  Rng rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 4);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, m + 2, rng));
    const int k = 1 + static_cast<int>(rng() % m);
    const int q = 1 + static_cast<int>(rng() % k);
    const Selection sel = testing::random_selection(m, q, rng);
    const SpectrumReport rep = spectrum_balanced(X, sel, k);
    expect_matches_oracle(X, rep);
    expect_valid_eigpairs(X, rep);
    const PointDescriptor d = describe_balanced(X, sel, k);
    if (rep.lambda_min < -1e-10) {
      EXPECT_NEAR(lambda_min_closed_form(d), rep.lambda_min, 1e-10);
    }
  }
}

TEST(SpectrumProperty, CouplingProductsAreMinusOne) {
  Rng rng(25);
  int pairs = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const RandomCase c = random_case(rng, true);
    const SpectrumReport rep = spectrum_canonical(c.cp);
    std::map<std::tuple<std::string, int, int>, std::vector<double>> groups;
    for (const EigPair& e : rep.eigpairs) {
      if (e.coupling && e.provenance.branch != 0) {
        groups[{e.provenance.family, e.provenance.i, e.provenance.j}]
            .push_back(*e.coupling);
      }
    }
    for (const auto& [key, v] : groups) {
      if (v.size() != 2) continue;
      EXPECT_NEAR(v[0] * v[1], -1.0, 1e-12);
      ++pairs;
    }
  }
  EXPECT_GT(pairs, 0);
}

TEST(SpectrumProperty, MixedEigenvalueSignTrichotomy) {
  Rng rng(26);
  std::uniform_real_distribution<double> unif(0.2, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    // Equal values on purpose in some trials.
    const double s1 = unif(rng);
    const double s2 = trial % 5 == 0 ? s1 : unif(rng);
    const double s3 = unif(rng);
    VectorXd sigma = vec({s1, s2, s3});
    std::sort(sigma.data(), sigma.data() + 3, std::greater<>());
    const DataMatrixSVD X = diag_x({sigma(0), sigma(1), sigma(2)}, 3, 5);
    const Selection sel({static_cast<int>(rng() % 3)});
    const double a = std::exp(std::uniform_real_distribution<double>(-2, 2)(rng));
    const SpectrumReport rep = spectrum_full_rank_scaled(X, sel, a);
    const double lambda = X.sigma_at(sel.indices()[0]);
    for (const EigPair& e : rep.eigpairs) {
      if (e.provenance.family != "unselected-mixed" || e.provenance.branch != -1) {
        continue;
      }
      const double sigma_i = X.sigma_at(e.provenance.i);
      if (lambda < sigma_i - 1e-12) {
        EXPECT_LT(e.value, 0.0);
      } else if (lambda > sigma_i + 1e-12) {
        EXPECT_GT(e.value, 0.0);
      } else {
        EXPECT_NEAR(e.value, 0.0, 1e-12);
      }
    }
  }
}

std::vector<std::pair<double, double>> scaling_samples(const DataMatrixSVD& X,
                                                       const Selection& sel,
                                                       double centre) {
  const CanonicalPoint cp = build_canonical(X, sel, sel.q(), MatrixXd());
  std::vector<std::pair<double, double>> out;
  for (double f : {1.0, 2.0, 4.0, 8.0, 0.5, 0.25}) {
    const double a = centre * f;
    // Equals max(a^2 / lambda_k, lambda_k / a^2) for centre sqrt(lambda_k).
    const double level = std::max(f * f, 1.0 / (f * f));
    out.emplace_back(level,
                     std::abs(lambda_min_closed_form(describe_canonical(cp, a))));
  }
  return out;
}

void expect_strictly_decreasing(
    const std::vector<std::pair<double, double>>& samples) {
  for (const auto& [l1, v1] : samples) {
    for (const auto& [l2, v2] : samples) {
      if (l1 < l2 - 1e-12) EXPECT_GT(v1, v2) << l1 << " vs " << l2;
    }
  }
}

TEST(SpectrumProperty, ScalingVanishesWithUnitSelectedValue) {
  // lambda_k = 1: the balanced scale is a = 1 and the stated bound applies
  // directly in max(a^2, a^-2).
  const DataMatrixSVD X = diag_x({2, 1}, 2, 3);
  const Selection sel({1});
  const auto samples = scaling_samples(X, sel, 1.0);
  expect_strictly_decreasing(samples);
  for (const auto& [level, value] : samples) {
    EXPECT_LE(value, 2.0 * (4.0 - 1.0) / level + 1e-12);
  }
  const DataMatrixSVD Z = diag_x({3, 2, 1}, 3, 4);
  const auto more = scaling_samples(Z, Selection({0, 2}), 1.0);
  expect_strictly_decreasing(more);
  for (const auto& [level, value] : more) {
    EXPECT_LE(value, 2.0 * (4.0 - 1.0) / level + 1e-12);
  }
}

TEST(SpectrumProperty, ScalingVanishesAroundBalancedScale) {
  Rng rng(27);
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 3 + static_cast<int>(rng() % 3);
    const DataMatrixSVD X = load_data_matrix(random_gaussian(m, m + 1, rng));
    const int k = 1 + static_cast<int>(rng() % (m - 1));
    std::vector<int> idx;
    for (int j = 0; j < k - 1; ++j) idx.push_back(j);
    idx.push_back(k + static_cast<int>(rng() % (m - k)));
    const Selection sel(idx);
    ASSERT_TRUE(strict_saddle_test(X, sel));
    const double lk = X.sigma_at(idx.back());
    const double sp = X.sigma_at(*first_deficit(X, sel));
    const auto samples = scaling_samples(X, sel, std::sqrt(lk));
    expect_strictly_decreasing(samples);
    for (const auto& [level, value] : samples) {
      EXPECT_LE(value, 2.0 * (sp * sp - lk * lk) / (lk * level) + 1e-12);
    }
  }
}

TEST(SpectrumProperty, ResidualKernelsAgree) {
  Rng rng(28);
  const RandomCase c = random_case(rng, true);
  const SpectrumReport rep = spectrum_canonical(c.cp);
  const auto par = eigpair_residuals(c.X, rep);
  const auto ser = eigpair_residuals_serial(c.X, rep);
  ASSERT_EQ(par.size(), ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) EXPECT_EQ(par[i], ser[i]);
}

}  // namespace
}  // namespace mfland
