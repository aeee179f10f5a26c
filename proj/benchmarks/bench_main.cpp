// Copyright 2026 The cvdvswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "cvdvswap/gaussian_modes.hpp"
#include "cvdvswap/protocol.hpp"
#include "cvdvswap/register.hpp"
#include "cvdvswap/rng.hpp"

namespace {

using namespace cvdvswap;

void BM_QftApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(1);
  JointState s(n);
  for (auto& a : s.amplitudes()) a = {rng.normal(), rng.normal()};
  s.normalize();
  for (auto _ : state) {
    s = qft_apply(std::move(s), Side::Alice);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(s.size()));
}
BENCHMARK(BM_QftApply)->DenseRange(2, 10, 2)->Complexity();

void BM_PostHomodyneState(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SqueezedMode mode(sigma_from_db(15.0));
  for (auto _ : state) {
    auto s = post_homodyne_state(n, mode, 0.37, 0.21);
    benchmark::DoNotOptimize(s.amplitudes().data());
  }
}
BENCHMARK(BM_PostHomodyneState)->DenseRange(2, 8, 2);

void BM_RunTrial(benchmark::State& state) {
  ProtocolConfig config;
  config.n = static_cast<int>(state.range(0));
  config.s_c = static_cast<int>(state.range(1));
  config.sigma = sigma_from_db(15.0);
  Rng rng(7);
  for (auto _ : state) {
    auto r = run_trial(config, rng);
    benchmark::DoNotOptimize(r.fidelity);
  }
}
BENCHMARK(BM_RunTrial)->Args({2, 0})->Args({4, 0})->Args({5, 1})->Args({7, 3});

}  // namespace

BENCHMARK_MAIN();
