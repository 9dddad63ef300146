// Copyright 2026 The distea Authors. All Rights Reserved.
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

#include "distea/monitor.hpp"

namespace distea {
namespace {

void BM_ProbePair(benchmark::State& state) {
  Monitor mon(ProcessId("P"), {.record_events = state.range(0) != 0});
  MethodId m("P::hot");
  for (auto _ : state) {
    mon.on_entry(m);
    mon.on_return(m);
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_ProbePair)->Arg(0)->Arg(1);

void BM_ProbePairContended(benchmark::State& state) {
  static Monitor mon(ProcessId("P"));
  MethodId m("P::t" + std::to_string(state.thread_index()));
  for (auto _ : state) {
    mon.on_entry(m);
    mon.on_return(m);
  }
  state.SetItemsProcessed(state.iterations() * 2);
}
BENCHMARK(BM_ProbePairContended)->Threads(1)->Threads(4);

void BM_ClockStamp(benchmark::State& state) {
  ClockCell cell(ProcessId("P"));
  for (auto _ : state) benchmark::DoNotOptimize(cell.stamp_event());
}
BENCHMARK(BM_ClockStamp);

}  // namespace
}  // namespace distea

BENCHMARK_MAIN();
