// Copyright 2026 The swlab authors
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

#include "swlab/bigworld.hpp"
#include "swlab/coalesce.hpp"
#include "swlab/green.hpp"
#include "swlab/topology.hpp"
#include "swlab/walk.hpp"

namespace {

using namespace swlab;

void BM_SampleGraph(benchmark::State& state) {
  const TorusSpec spec{1, state.range(0), 1};
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(sample_small_world(spec, seed++));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_SampleGraph)->Arg(256)->Arg(4096);

void BM_WalkerStep(benchmark::State& state) {
  const TorusSpec spec{1, 4096, 1};
  const SmallWorldGraph g = sample_small_world(spec, 7);
  const KernelSampler ks(spec, WalkKernel::simple(spec, 0.3));
  Walker w(spec, 0);
  Rng rng(11);
  for (auto _ : state) {
    w.step(g, ks, rng);
    benchmark::DoNotOptimize(w.pos());
  }
}
BENCHMARK(BM_WalkerStep);

void BM_MeetingReplica(benchmark::State& state) {
  const TorusSpec spec{1, 64, 1};
  const SmallWorldGraph g = sample_small_world(spec, 7);
  const KernelSampler ks(spec, WalkKernel::simple(spec, 0.3));
  Rng rng(11);
  const double horizon = 50.0 * 128.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(
        sample_meeting_time(g, ks, TimeModel::continuous, 64, 0, rng, horizon));
}
BENCHMARK(BM_MeetingReplica);

void BM_ReturnProbabilities(benchmark::State& state) {
  const TorusSpec spec{1, 64, 1};
  const WalkKernel k = WalkKernel::simple(spec, 0.5);
  const int n0 = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(return_probabilities(spec, k, n0));
}
BENCHMARK(BM_ReturnProbabilities)->Arg(16)->Arg(24)->Arg(32);

void BM_GreenFixedPoint(benchmark::State& state) {
  const PhiFunction phi = build_phi_lattice(1);
  for (auto _ : state)
    benchmark::DoNotOptimize(bigworld_green_fixed_point(0.5, phi, 10.0));
}
BENCHMARK(BM_GreenFixedPoint);

void BM_BuildPhiLattice3(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(build_phi_lattice(3));
}
BENCHMARK(BM_BuildPhiLattice3)->Unit(benchmark::kMillisecond);

void BM_KingmanRow(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(kingman_row(n, 1.0));
}
BENCHMARK(BM_KingmanRow)->Arg(8)->Arg(25)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
