// Copyright 2026 The ssdrbm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Microbenchmarks for the per-iteration building blocks at the 784 x 50
// layer size.

#include <benchmark/benchmark.h>

#include <random>

#include "ssdrbm/gradient.hpp"
#include "ssdrbm/linalg.hpp"
#include "ssdrbm/optimizer.hpp"
#include "ssdrbm/sampler.hpp"

namespace ssdrbm {
namespace {

Matrix normal_matrix(Index rows, Index cols, std::uint64_t seed) {
  SplitMix64 gen(seed);
  std::normal_distribution<double> normal;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(gen);
  }
  return m;
}

Matrix binary_matrix(Index rows, Index cols, std::uint64_t seed) {
  SplitMix64 gen(seed);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = gen.uniform() < 0.5 ? 0.0 : 1.0;
  }
  return m;
}

void BM_ExactSvd(benchmark::State& state) {
  const Matrix g = normal_matrix(state.range(0), state.range(1), 1);
  for (auto _ : state) benchmark::DoNotOptimize(svd(g));
}
BENCHMARK(BM_ExactSvd)->Args({100, 25})->Args({784, 50})->Args({784, 500});

void BM_RandomizedSvd(benchmark::State& state) {
  const Matrix g = normal_matrix(784, 500, 2);
  RandomizedSvdOptions opt;
  opt.target_rank = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(randomized_svd(g, opt));
}
BENCHMARK(BM_RandomizedSvd)->Arg(10)->Arg(50);

void BM_SsdMatrixStep(benchmark::State& state) {
  const Matrix w = normal_matrix(784, 50, 3);
  const Matrix g = normal_matrix(784, 50, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ssd_matrix_step(w, g, 1e-3, SvdMode{}));
  }
}
BENCHMARK(BM_SsdMatrixStep);

void BM_SgdMatrixStep(benchmark::State& state) {
  const Matrix w = normal_matrix(784, 50, 3);
  const Matrix g = normal_matrix(784, 50, 4);
  Matrix velocity = Matrix::Zero(784, 50);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sgd_step(w, g, 1e-3, velocity, UpdateRule::sgd, 0.0));
  }
}
BENCHMARK(BM_SgdMatrixStep);

void BM_SsdVectorStep(benchmark::State& state) {
  const Vector x = normal_matrix(784, 1, 5).col(0);
  const Vector g = normal_matrix(784, 1, 6).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(ssd_vector_step(x, g, 1e-3));
}
BENCHMARK(BM_SsdVectorStep);

// One CD-k gradient estimate on a 100-example batch.
void BM_CdGradient(benchmark::State& state) {
  const Family family =
      state.range(1) == 0 ? Family::bernoulli : Family::gaussian;
  RbmParams p = RbmParams::zeros(family, 784, 50,
                                 family == Family::gaussian
                                     ? CovarianceKind::diagonal_log
                                     : CovarianceKind::identity);
  p.W = 0.01 * normal_matrix(784, 50, 7);
  const Matrix batch = binary_matrix(100, 784, 8);
  RngStream rng(9);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const CdResult cd = cd_k(p, batch, k, rng);
    benchmark::DoNotOptimize(estimate_gradients(p, cd.positive, cd.negative));
  }
}
BENCHMARK(BM_CdGradient)
    ->Args({1, 0})
    ->Args({10, 0})
    ->Args({1, 1})
    ->Args({10, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ssdrbm

BENCHMARK_MAIN();
