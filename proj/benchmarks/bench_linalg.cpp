// Copyright 2026 The commudyn Authors
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
#include <random>

#include <benchmark/benchmark.h>

#include "commudyn/commudyn.hpp"

namespace {

using namespace commudyn;
using superop::SuperOperator;

SuperOperator random_unital(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  auto herm = [&] {
    ComplexMatrix m(dim, dim);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = {n(rng), n(rng)};
    return ComplexMatrix(0.5 * (m + m.adjoint()));
  };
  return SuperOperator::hamiltonian(herm()) + SuperOperator::dissipator(herm(), 0.3);
}

void BM_Expm(benchmark::State& state) {
  const auto l = random_unital(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(oracle::expm(l));
}
BENCHMARK(BM_Expm)->Arg(2)->Arg(4)->Arg(8);

void BM_Diagonalize(benchmark::State& state) {
  const auto l = random_unital(static_cast<int>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(superop::diagonalize(l));
}
BENCHMARK(BM_Diagonalize)->Arg(2)->Arg(4)->Arg(8);

void BM_ValidateChannel(benchmark::State& state) {
  const auto map = oracle::expm(random_unital(static_cast<int>(state.range(0)), 3));
  for (auto _ : state) benchmark::DoNotOptimize(superop::validate_channel(map));
}
BENCHMARK(BM_ValidateChannel)->Arg(2)->Arg(4)->Arg(8);

void BM_ResolventChannel(benchmark::State& state) {
  const auto l = random_unital(4, 4);
  const int k = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(genfactory::resolvent_channel(l, 1.0, k));
}
BENCHMARK(BM_ResolventChannel)->DenseRange(0, 3);

void BM_WeylRelations(benchmark::State& state) {
  const weyl::WeylFamily fam(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(weyl::relations_check(fam));
}
BENCHMARK(BM_WeylRelations)->DenseRange(2, 5);

void BM_Volterra(benchmark::State& state) {
  const auto signal = kernel::ModeSignal::from_exponentials({0.3, 0.7}, {-1.0, -3.0});
  const auto k = kernel::memory_kernel(signal);
  const double step = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kernel::volterra_check(k, signal, 2.0, step, false));
}
BENCHMARK(BM_Volterra)->Arg(100)->Arg(400);

}  // namespace
