// Copyright 2026 The bilevel Authors
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
#include <string>
#include <vector>

#include "bilevel/engine.hpp"
#include "bilevel/generator.hpp"
#include "bilevel/io.hpp"

using namespace bilevel;

namespace {

Instance fixture(const char* name) {
  return parse_and_validate(std::string(BILEVEL_FIXTURE_DIR) + "/" + name).instance;
}

std::vector<Instance> random_batch(std::uint64_t seed, std::size_t count, std::size_t dim) {
  std::mt19937_64 rng(seed);
  GeneratorOptions opt;
  opt.max_n = dim;
  opt.max_d = dim;
  std::vector<Instance> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_instance(rng, opt));
  return out;
}

void BM_FixtureMixed(benchmark::State& state) {
  const Instance in = fixture("example1.json");
  const Rat eps(BigInt(1), BigInt(8));
  for (auto _ : state) benchmark::DoNotOptimize(solve_mixed(in, eps));
}
BENCHMARK(BM_FixtureMixed)->Unit(benchmark::kMicrosecond);

void BM_FixturePure(benchmark::State& state) {
  const Instance in = fixture("example1_pure.json");
  for (auto _ : state) benchmark::DoNotOptimize(solve_pure(in));
}
BENCHMARK(BM_FixturePure)->Unit(benchmark::kMicrosecond);

void BM_RandomMixed(benchmark::State& state) {
  const auto batch = random_batch(7, 16, static_cast<std::size_t>(state.range(0)));
  const Rat eps(BigInt(1), BigInt(16));
  for (auto _ : state) {
    for (const Instance& in : batch) benchmark::DoNotOptimize(solve_mixed(in, eps));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_RandomMixed)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_ReferenceOracle(benchmark::State& state) {
  const auto batch = random_batch(7, 16, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    for (const Instance& in : batch) benchmark::DoNotOptimize(reference_oracle(in, Variant::kMixed));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_ReferenceOracle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_RandomPure(benchmark::State& state) {
  const auto batch = random_batch(8, 16, 2);
  for (auto _ : state) {
    for (const Instance& in : batch) benchmark::DoNotOptimize(solve_pure(in));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(batch.size()));
}
BENCHMARK(BM_RandomPure)->Unit(benchmark::kMillisecond);

void BM_HiddenRational(benchmark::State& state) {
  const BigInt cap(state.range(0));
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<long> den(1, state.range(0));
  for (auto _ : state) {
    const long q = den(rng);
    const Rat hidden{BigInt(std::uniform_int_distribution<long>(0, q)(rng)), BigInt(q)};
    SearchStats stats;
    benchmark::DoNotOptimize(
        bracket_and_reconstruct([&](const Rat& a) { return hidden <= a; }, 0, 1, cap, stats));
  }
}
BENCHMARK(BM_HiddenRational)->RangeMultiplier(100)->Range(100, 1000000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
