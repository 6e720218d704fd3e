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
// Closed-form propagators against the ordered-exponential reference they replace.
#include <benchmark/benchmark.h>

#include "commudyn/commudyn.hpp"

namespace {

using namespace commudyn;

classical::CirculantGenerator ring(int d, int axes) {
  classical::CirculantGenerator g(d, axes);
  for (std::size_t m = 1; m < g.size(); ++m)
    g.set(m, TimeFunction::constant(0.1 + 0.01 * static_cast<double>(m)) + TimeFunction::sine(0.05, 1.0 + m));
  g.complete_diagonal();
  return g;
}

void BM_ClassicalPropagate(benchmark::State& state) {
  const auto g = ring(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(classical::propagate(g, 0.0, 1.0, Mode::markov));
}
BENCHMARK(BM_ClassicalPropagate)->Arg(4)->Arg(16)->Arg(64);

void BM_ClassicalOrdered(benchmark::State& state) {
  const auto g = ring(static_cast<int>(state.range(0)), 1);
  const oracle::MatrixFn l = [&](double t) { return ComplexMatrix(classical::circulant_matrix(g, t).cast<cplx>()); };
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ordered_exp(l, 0.0, 1.0, 256, false));
}
BENCHMARK(BM_ClassicalOrdered)->Arg(4)->Arg(16)->Arg(64);

void BM_WeylEvolve(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const weyl::WeylFamily fam(d, 1);
  const auto a = ring(d, 2);
  for (auto _ : state) benchmark::DoNotOptimize(weyl::evolve(fam, a, 0.0, 1.0, Mode::markov));
}
BENCHMARK(BM_WeylEvolve)->DenseRange(2, 5);

void BM_WeylOrdered(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const weyl::WeylFamily fam(d, 1);
  const auto a = ring(d, 2);
  const oracle::GeneratorFn l = [&](double t) { return weyl::map_from_coeffs(fam, a, t); };
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ordered_exp(l, 0.0, 1.0, 256, false));
}
BENCHMARK(BM_WeylOrdered)->DenseRange(2, 5);

qubit::QubitSpec driven() {
  qubit::QubitSpec s;
  s.gamma = TimeFunction::constant(1.0) + TimeFunction::sine(1.0, 1.0);
  s.epsilon = TimeFunction::cosine(0.5, 2.0);
  s.c00 = TimeFunction::constant(0.3);
  s.mu = 0.3;
  return s;
}

void BM_QubitPropagate(benchmark::State& state) {
  const auto s = driven();
  for (auto _ : state) benchmark::DoNotOptimize(qubit::propagate(s, 0.0, 2.0, Mode::markov));
}
BENCHMARK(BM_QubitPropagate);

void BM_QubitOrdered(benchmark::State& state) {
  const auto s = driven();
  const oracle::GeneratorFn l = [&](double t) { return qubit::build_generator(s, t); };
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ordered_exp(l, 0.0, 2.0, static_cast<int>(state.range(0)), false));
}
BENCHMARK(BM_QubitOrdered)->Arg(1024)->Arg(8192);

}  // namespace
