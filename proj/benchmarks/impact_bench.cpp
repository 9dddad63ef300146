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

#include <random>

#include "distea/impact.hpp"

namespace distea {
namespace {

TraceCorpus synthetic_corpus(std::size_t processes, std::size_t methods) {
  std::mt19937_64 rng(1);
  std::vector<ProcessTrace> traces;
  for (std::size_t p = 0; p < processes; ++p) {
    std::vector<MethodRecord> recs;
    for (std::size_t m = 0; m < methods; ++m) {
      std::uint64_t first = rng() % 100000;
      recs.emplace_back(MethodId("P" + std::to_string(p) + "::m" + std::to_string(m)), LamportClock{first},
                        LamportClock{first + 1 + rng() % 1000});
    }
    traces.emplace_back(ProcessId("P" + std::to_string(p)), std::move(recs));
  }
  return merge(std::move(traces));
}

void BM_ImpactQuery(benchmark::State& state) {
  auto corpus = synthetic_corpus(4, static_cast<std::size_t>(state.range(0)));
  MethodId q("P0::m0");
  for (auto _ : state) benchmark::DoNotOptimize(impact_set(corpus, q));
  state.SetItemsProcessed(state.iterations() * 4 * state.range(0));
}
BENCHMARK(BM_ImpactQuery)->Arg(30)->Arg(1000)->Arg(10000);

void BM_EffectivenessReport(benchmark::State& state) {
  auto corpus = synthetic_corpus(4, static_cast<std::size_t>(state.range(0)));
  QuerySet all(executed_methods(corpus));
  for (auto _ : state) benchmark::DoNotOptimize(effectiveness(corpus, all));
}
BENCHMARK(BM_EffectivenessReport)->Arg(30)->Arg(100);

}  // namespace
}  // namespace distea

BENCHMARK_MAIN();
