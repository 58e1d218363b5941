// Copyright 2026 The OLA Authors
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

#include "ola/approx.h"
#include "ola/dp_optimizer.h"
#include "ola/net.h"
#include "ola/quadrature.h"
#include "ola/random.h"
#include "ola/runtime_model.h"
#include "ola/trainer.h"

namespace ola {
namespace {

void BM_GaussHermiteRule(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ComputeGaussHermiteRule(n));
}
BENCHMARK(BM_GaussHermiteRule)->Arg(64)->Arg(512)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_FitRelu(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const GaussianWeight w(-1.3, 2.6);
  for (auto _ : state) benchmark::DoNotOptimize(Fit(ScalarActivation::ReLU(), w, d));
}
BENCHMARK(BM_FitRelu)->Arg(7)->Arg(63)->Arg(255)->Unit(benchmark::kMillisecond);

void BM_FitGelu(benchmark::State& state) {
  const GaussianWeight w(0.2, 1.5);
  for (auto _ : state) benchmark::DoNotOptimize(Fit(ScalarActivation::GELU(), w, 255));
}
BENCHMARK(BM_FitGelu)->Unit(benchmark::kMillisecond);

void BM_MseByDegree(benchmark::State& state) {
  const GaussianWeight w(-1.3, 2.6);
  for (auto _ : state) benchmark::DoNotOptimize(MseByDegree(ScalarActivation::ReLU(), w, 255));
}
BENCHMARK(BM_MseByDegree)->Unit(benchmark::kMillisecond);

DpProblem ScalingProblem(int n_l) {
  Rng rng(31);
  const DegreeSpace space = DegreeSpace::Default();
  std::vector<double> A;
  std::vector<MseTable> E(n_l);
  std::vector<std::map<int, int>> tau(n_l);
  for (int i = 0; i < n_l; ++i) {
    A.push_back(rng.Uniform(0.0, 2.0));
    double e = rng.Uniform(0.05, 0.2);
    int c = 1 + static_cast<int>(rng.Index(30));
    for (int d : space.degrees()) {
      E[i][d] = e;
      tau[i][d] = c;
      e *= rng.Uniform(0.2, 0.8);
      c += static_cast<int>(rng.Index(40));
    }
  }
  return DpProblem{A, E, MakeCostTable(tau), space};
}

void BM_SolveDp(benchmark::State& state) {
  const DpProblem p = ScalingProblem(static_cast<int>(state.range(0)));
  const int n_k = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(SolveDp(p, n_k));
  state.SetComplexityN(state.range(0) * state.range(1));
}
BENCHMARK(BM_SolveDp)
    ->Args({3, 500})
    ->Args({31, 1000})
    ->Args({31, 5000})
    ->Args({31, 20000})
    ->Unit(benchmark::kMillisecond);

void BM_Forward(benchmark::State& state) {
  Rng rng(5);
  const NetModel model = InitModel(2, {32, 32, 32}, 3, ScalarActivation::ReLU(), rng);
  const std::vector<double> x = {0.3, -1.1};
  for (auto _ : state) benchmark::DoNotOptimize(Forward(model, x));
}
BENCHMARK(BM_Forward);

void BM_ForwardSubstituted(benchmark::State& state) {
  Rng rng(5);
  const NetModel model = InitModel(2, {32, 32, 32}, 3, ScalarActivation::ReLU(), rng);
  std::vector<HermiteSeries> series;
  for (int i = 0; i < 3; ++i) {
    series.push_back(Fit(ScalarActivation::ReLU(), GaussianWeight(0.0, 1.0),
                         static_cast<int>(state.range(0))));
  }
  const NetModel sub = Substitute(model, series);
  const std::vector<double> x = {0.3, -1.1};
  for (auto _ : state) benchmark::DoNotOptimize(Forward(sub, x));
}
BENCHMARK(BM_ForwardSubstituted)->Arg(7)->Arg(63)->Arg(255);

}  // namespace
}  // namespace ola

BENCHMARK_MAIN();
