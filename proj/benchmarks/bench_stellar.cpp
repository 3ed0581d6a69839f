// Copyright 2026 The stellar-witness Authors
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

#include <benchmark/benchmark.h>

#include "stellar/fock_gaussian.hpp"
#include "stellar/multimode.hpp"
#include "stellar/threshold.hpp"
#include "stellar/witness.hpp"

namespace {

stellar::GaussianParams sample_params() {
  stellar::GaussianParams p;
  p.theta = 0.3;
  p.vartheta = 1.1;
  p.r = 0.8;
  p.alpha = {1.2, -0.7};
  return p;
}

void BM_MatrixElement(benchmark::State& state) {
  const auto p = sample_params();
  const long k = state.range(0);
  for (auto _ : state) benchmark::DoNotOptimize(stellar::gaussian_matrix_element(p, k, k + 3));
}
BENCHMARK(BM_MatrixElement)->Arg(0)->Arg(10)->Arg(40);

void BM_GaussianBlock(benchmark::State& state) {
  const auto p = sample_params();
  const auto size = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stellar::gaussian_block(p, size - 1, size - 1));
}
BENCHMARK(BM_GaussianBlock)->Arg(10)->Arg(40)->Arg(100);

void BM_Objective(benchmark::State& state) {
  const auto w = stellar::cat_pair_witness(2.0, 1.0);
  const auto p = sample_params();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stellar::objective(w, n, p));
}
BENCHMARK(BM_Objective)->Arg(1)->Arg(3);

void BM_Threshold(benchmark::State& state) {
  const auto w = stellar::fock_pair_witness(0, 2, 0.7);
  stellar::OptimizerConfig config;
  config.starts = 40;
  config.threads = 1;
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stellar::compute_threshold(w, n, config).value);
}
BENCHMARK(BM_Threshold)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_MultimodeCompress(benchmark::State& state) {
  const stellar::MultimodeWitness w(2, {{1.0, stellar::MultimodeState::fock({{0, 1}})}});
  auto params = stellar::MultimodeGaussianParams::identity(2);
  params.modes[0].r = 0.4;
  params.modes[1].alpha = {0.3, 0.2};
  params.generator(0, 1) = {0.5, 0.1};
  params.generator(1, 0) = {-0.5, 0.1};
  for (auto _ : state) benchmark::DoNotOptimize(stellar::multimode_compress(w, params, 2));
}
BENCHMARK(BM_MultimodeCompress)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
