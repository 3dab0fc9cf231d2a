// Copyright 2026 The kmm-bkp Authors
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

#include <vector>

#include "kmm/quadrature.hpp"
#include "kmm/wick.hpp"

namespace {

using kmm::ExternalField;
using kmm::WickOptions;

const std::vector<std::vector<int>> kKeys = {{3, 1}, {3, 1, 4}, {5, 3, 4}, {3, 1, 4, 4}, {5, 3, 4, 4}};

void BM_TraceMomentReference(benchmark::State& state) {
  const auto& key = kKeys[static_cast<std::size_t>(state.range(0))];
  const auto field = ExternalField::random(static_cast<int>(state.range(1)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmm::gaussian_trace_moment_reference(key, field, WickOptions{16, false}));
  }
}

void BM_TraceMomentSerial(benchmark::State& state) {
  const auto& key = kKeys[static_cast<std::size_t>(state.range(0))];
  const auto field = ExternalField::random(static_cast<int>(state.range(1)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmm::gaussian_trace_moment(key, field, WickOptions{16, false}));
  }
}

void BM_TraceMomentParallel(benchmark::State& state) {
  const auto& key = kKeys[static_cast<std::size_t>(state.range(0))];
  const auto field = ExternalField::random(static_cast<int>(state.range(1)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(kmm::gaussian_trace_moment(key, field, WickOptions{16, true}));
  }
}

void BM_PVMatrix(benchmark::State& state) {
  kmm::QuadOptions options;
  options.parallel = state.range(0) != 0;
  const std::vector<double> lambdas{0.5, 1, 2, 3, 5, 8};
  for (auto _ : state) benchmark::DoNotOptimize(kmm::pv_matrix(lambdas, -0.01, 1e-9, nullptr, options));
}

// the reference enumerates N^faces index assignments, so keep it small
BENCHMARK(BM_TraceMomentReference)->ArgsProduct({{0, 1, 2}, {2, 3}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceMomentSerial)->ArgsProduct({{0, 1, 2, 3, 4}, {2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TraceMomentParallel)->ArgsProduct({{0, 1, 2, 3, 4}, {2, 4}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PVMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
