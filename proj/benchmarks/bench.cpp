// Copyright 2026 The ordertrans Authors
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

#include <sstream>

#include <benchmark/benchmark.h>

#include "ordertrans/cluster.hpp"
#include "ordertrans/divergence.hpp"
#include "ordertrans/dtmc.hpp"
#include "ordertrans/embed.hpp"
#include "ordertrans/independence.hpp"
#include "ordertrans/ingest.hpp"
#include "ordertrans/synth.hpp"

using namespace ordertrans;

namespace {

TransitionMatrix tpm(std::uint64_t seed) {
  Rng rng(seed);
  return random_ergodic_tpm(kNumStates, rng);
}

std::string feed(std::size_t n) {
  const auto seq = simulate(tpm(1), n, 2);
  std::ostringstream out;
  out << kCsvHeader << '\n';
  render_csv(out, seq, "MSFT", *parse_date("2018-11-07"), default_time_zones()[1], 3);
  return out.str();
}

}  // namespace

static void BM_ParseAndSegment(benchmark::State& state) {
  const auto text = feed(static_cast<std::size_t>(state.range(0)));
  const auto zones = default_time_zones();
  for (auto _ : state) {
    std::istringstream in(text);
    EventReader reader(in);
    benchmark::DoNotOptimize(segment(reader, zones));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ParseAndSegment)->Arg(10'000)->Arg(100'000);

static void BM_Simulate(benchmark::State& state) {
  const auto p = tpm(4);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(p, static_cast<std::size_t>(state.range(0)), 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(1'000'000);

static void BM_AccumulateEstimate(benchmark::State& state) {
  const auto seq = simulate(tpm(6), static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(estimate(accumulate(seq)));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AccumulateEstimate)->Arg(1'000'000);

static void BM_GTest(benchmark::State& state) {
  const auto seq = simulate(tpm(8), 100'000, 9);
  const auto table = build_table(seq);
  for (auto _ : state) benchmark::DoNotOptimize(g_statistic(table));
}
BENCHMARK(BM_GTest);

static void BM_Stationary(benchmark::State& state) {
  const auto p = tpm(10);
  for (auto _ : state) benchmark::DoNotOptimize(stationary(p));
}
BENCHMARK(BM_Stationary);

static void BM_JsdMatrix(benchmark::State& state) {
  std::vector<Distribution> d;
  for (std::uint64_t s = 0; s < 6; ++s) d.push_back(Distribution(stationary(tpm(20 + s)).pi));
  for (auto _ : state) benchmark::DoNotOptimize(jsd_matrix(d));
}
BENCHMARK(BM_JsdMatrix);

static void BM_Pca18x100(benchmark::State& state) {
  std::vector<TransitionMatrix> m;
  std::vector<std::string> labels;
  for (std::uint64_t s = 0; s < 18; ++s) {
    m.push_back(tpm(40 + s));
    labels.push_back(std::to_string(s));
  }
  const auto obs = normalize(make_observations(m, labels));
  for (auto _ : state) benchmark::DoNotOptimize(pca(obs, 2));
}
BENCHMARK(BM_Pca18x100);

static void BM_Dbscan(benchmark::State& state) {
  Rng rng(11);
  std::vector<Point2> pts(static_cast<std::size_t>(state.range(0)));
  for (auto& p : pts) p = {rng.normal() * 5, rng.normal() * 5};
  for (auto _ : state) benchmark::DoNotOptimize(dbscan(pts, {1.0, 4}));
}
BENCHMARK(BM_Dbscan)->Arg(200)->Arg(2000);
BENCHMARK_MAIN();
