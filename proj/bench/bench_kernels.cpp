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


// Parallel kernels against their serial twins.

#include <benchmark/benchmark.h>

#include "mfland/canonical.hpp"
#include "mfland/oracle.hpp"
#include "mfland/random.hpp"
#include "mfland/spectrum.hpp"

namespace {

struct Fixture {
  mfland::DataMatrixSVD X;
  mfland::FactorPair p;
};

Fixture make_fixture(int m, int k) {
  mfland::Rng rng(42);
  const int n = m + 2;
  const auto X = mfland::load_data_matrix(mfland::random_gaussian(m, n, rng));
  return {X, {mfland::random_gaussian(m, k, rng),
              mfland::random_gaussian(k, n, rng)}};
}

void BM_DenseHessian(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) benchmark::DoNotOptimize(mfland::dense_hessian(f.X, f.p));
}

void BM_DenseHessianSerial(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfland::dense_hessian_serial(f.X, f.p));
  }
}

mfland::SpectrumReport canonical_report(const mfland::DataMatrixSVD& X) {
  const int k = std::min(4, X.m());
  std::vector<int> idx;
  for (int i = 0; i < k; ++i) idx.push_back(i + 1);
  return mfland::spectrum_full_rank_scaled(
      X, mfland::Selection::from_one_based(idx), 1.0);
}

void BM_EigpairResiduals(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<int>(state.range(0)), 4);
  const auto rep = canonical_report(f.X);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfland::eigpair_residuals(f.X, rep));
  }
}

void BM_EigpairResidualsSerial(benchmark::State& state) {
  const Fixture f = make_fixture(static_cast<int>(state.range(0)), 4);
  const auto rep = canonical_report(f.X);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mfland::eigpair_residuals_serial(f.X, rep));
  }
}

}  // namespace

BENCHMARK(BM_DenseHessian)->Arg(8)->Arg(32)->Arg(64);
BENCHMARK(BM_DenseHessianSerial)->Arg(8)->Arg(32)->Arg(64);
BENCHMARK(BM_EigpairResiduals)->Arg(8)->Arg(32)->Arg(64);
BENCHMARK(BM_EigpairResidualsSerial)->Arg(8)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
