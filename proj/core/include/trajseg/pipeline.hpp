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

#ifndef TRAJSEG__PIPELINE_HPP_
#define TRAJSEG__PIPELINE_HPP_

#include "trajseg/config.hpp"
#include "trajseg/metrics.hpp"
#include "trajseg/synth.hpp"
#include "trajseg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace trajseg::pipeline
{

namespace fs = std::filesystem;

/// Everything the scenario and driving levels produce for one trip.
struct TripAnalysis
{
  ExtremeSet extremes;
  std::vector<Scenario> scenarios;
  std::vector<std::vector<Regime>> regimes;
  /// Scenarios whose regimes could not be isolated (missing pedal signals).
  std::size_t regime_failures{0};
};

/// Segment a trip with derived signals and isolate regimes per scenario.
TripAnalysis analyze_trip(const TripRecord & trip, const Config & config);

// ---------------------------------------------------------------------------
// Subcommands. Every output directory receives effective_config.json.

struct IngestOptions
{
  std::string input_glob;
  fs::path schema;
  fs::path out;
  bool emit_normalized{false};
};

struct IngestSummary
{
  std::size_t files{0};
  std::size_t samples{0};
  std::size_t trips{0};
  std::size_t dropped_trips{0};
  std::size_t rejected_rows{0};
};

IngestSummary run_ingest(const IngestOptions & options, const Config & config);

struct SegmentOptions
{
  fs::path trips;
  fs::path out;
};

struct SegmentSummary
{
  std::size_t trips{0};
  std::size_t scenarios{0};
  std::size_t regimes{0};
  std::size_t regime_failures{0};
};

SegmentSummary run_segment(const SegmentOptions & options, const Config & config);

struct AnalyzeOptions
{
  fs::path trips;
  fs::path segments;
  fs::path out;
};

struct AnalyzeSummary
{
  std::size_t trips{0};
  std::size_t cutins{0};
  std::size_t turning_points{0};
};

AnalyzeSummary run_analyze(const AnalyzeOptions & options, const Config & config);

struct ReportOptions
{
  fs::path metrics;
  fs::path out;
};

struct ReportSummary
{
  std::vector<std::string> files;
  bool envelope_fitted{false};
};

ReportSummary run_report(const ReportOptions & options, const Config & config);

struct SynthOptions
{
  std::size_t plans{100};
  std::uint64_t seed{1};
  double noise_mps{0.0};
  fs::path out;
  synth::GeneratorConfig generator;
};

struct SynthSummary
{
  std::size_t trips{0};
  std::size_t samples{0};
};

SynthSummary run_synth(const SynthOptions & options, const Config & config);

struct VerifyOptions
{
  fs::path corpus;
};

struct VerifySummary
{
  std::size_t trips{0};
  /// Mean token accuracy of recovered scenario type sequences.
  double type_accuracy{0.0};
  /// Fraction of trips whose type sequence matches exactly.
  double exact_match_rate{0.0};
  /// Among exact matches: fraction whose regime boundaries are within one
  /// sample of the ground truth.
  double regime_match_rate{0.0};
};

VerifySummary run_verify(const VerifyOptions & options, const Config & config);

/// Compare one segmented trip with its ground truth.
struct TripComparison
{
  double type_accuracy{0.0};
  bool exact_types{false};
  bool regimes_within_tolerance{false};
};

TripComparison compare_with_truth(
  const TripAnalysis & analysis, std::span<const Scenario> truth_scenarios,
  std::span<const std::vector<Regime>> truth_regimes, Index tolerance = 1);

/// Normalized trips listed in <dir>/trips.jsonl, sorted by (vehicle, trip).
std::vector<fs::path> list_trip_files(const fs::path & dir);
TripRecord load_trip(const fs::path & csv_path, const std::string & vehicle_id,
                     const std::string & trip_id, const std::string & vehicle_model);
std::vector<TripRecord> load_trips(const fs::path & dir, int workers = 1);

}  // namespace trajseg::pipeline

#endif  // TRAJSEG__PIPELINE_HPP_
