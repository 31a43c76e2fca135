// Copyright 2026 The trajseg Authors
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

#include "trajseg/event_search.hpp"
#include "trajseg/ingest.hpp"
#include "trajseg/pipeline.hpp"
#include "trajseg/records.hpp"
#include "trajseg/segmentation.hpp"
#include "trajseg/stats.hpp"
#include "trajseg/synth.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace
{

using namespace trajseg;

// Rendered synthetic trip with roughly `scenarios` events.
TripRecord synthetic_trip(int scenarios)
{
  synth::GeneratorConfig gen;
  gen.min_scenarios = scenarios;
  gen.max_scenarios = scenarios;
  const std::uint64_t seed = 42;
  return synth::render_trip(synth::random_plan(gen, seed), seed).trip;
}

void BM_EventSearch(benchmark::State & state)
{
  const TripRecord trip = synthetic_trip(static_cast<int>(state.range(0)));
  const auto v = trip.speeds();
  const EventSearchConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(event_search::search(v, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}
BENCHMARK(BM_EventSearch)->Arg(10)->Arg(30);

void BM_SegmentTrip(benchmark::State & state)
{
  const TripRecord trip = synthetic_trip(static_cast<int>(state.range(0)));
  const Config config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(segmentation::segment_trip(trip, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trip.samples.size()));
}
BENCHMARK(BM_SegmentTrip)->Arg(10)->Arg(30);

void BM_AnalyzeTrip(benchmark::State & state)
{
  const TripRecord trip = synthetic_trip(30);
  const Config config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(pipeline::analyze_trip(trip, config));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(trip.samples.size()));
}
BENCHMARK(BM_AnalyzeTrip);

void BM_ParseTelemetry(benchmark::State & state)
{
  const std::string csv = records::trip_to_csv(synthetic_trip(30));
  const auto columns = ingest::ColumnMap::canonical();
  for (auto _ : state) {
    benchmark::DoNotOptimize(ingest::parse_telemetry(csv, columns));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(csv.size()));
}
BENCHMARK(BM_ParseTelemetry);

void BM_BoxSummary(benchmark::State & state)
{
  std::mt19937_64 rng(7);
  std::lognormal_distribution<double> dist(0.0, 1.0);
  std::vector<double> x(static_cast<std::size_t>(state.range(0)));
  for (auto & value : x) {
    value = dist(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(stats::box_summary(x));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BoxSummary)->Arg(1'000)->Arg(100'000);

void BM_AccumulatorAdd(benchmark::State & state)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto _ : state) {
    stats::Accumulator acc(10'000, 1'000, 3);
    for (int i = 0; i < 100'000; ++i) {
      acc.add(u(rng));
    }
    benchmark::DoNotOptimize(acc.count());
  }
  state.SetItemsProcessed(state.iterations() * 100'000);
}
BENCHMARK(BM_AccumulatorAdd);

}  // namespace

BENCHMARK_MAIN();
