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

#ifndef TRAJSEG__INGEST_HPP_
#define TRAJSEG__INGEST_HPP_

#include "trajseg/config.hpp"
#include "trajseg/types.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajseg::ingest
{

enum class Unit {
  kSecond,
  kMillisecond,
  kMetersPerSecond,
  kKilometersPerHour,
  kMilesPerHour,
  kDegreesPerSecond,
  kRadiansPerSecond,
  kMeter,
  kLitersPerHour,
  kMillilitersPerSecond,
  kGallonsPerHour,
  kRaw,
};

Unit unit_from_string(std::string_view name);
std::string_view to_string(Unit unit);

/// Multiply a raw value by this to obtain the canonical unit.
double to_canonical_factor(Unit unit);

struct ColumnSpec
{
  std::string column;
  Unit unit{Unit::kRaw};
};

/// Canonical field name -> source column. "t" and "v" are mandatory.
/// Known fields: t, v, brake_pedal, accel_pedal, yaw_rate, fuel_flow, gap,
/// pv_speed, pv_length, ignition.
class ColumnMap
{
public:
  ColumnMap() = default;

  void set(const std::string & field, ColumnSpec spec);
  const ColumnSpec * find(std::string_view field) const;
  const std::map<std::string, ColumnSpec, std::less<>> & fields() const { return fields_; }

  /// Throws Error(kSchema) when a mandatory mapping is missing or a unit does
  /// not fit its field.
  void validate() const;

  /// Identity map for the normalized trip CSV written by this library.
  static ColumnMap canonical();

  /// JSON object: {"v": {"column": "spd", "unit": "km/h"}, ...}.
  static ColumnMap from_json(std::string_view json_text);
  static ColumnMap load(const std::filesystem::path & path);
  std::string to_json() const;

private:
  std::map<std::string, ColumnSpec, std::less<>> fields_;
};

struct RowDiagnostic
{
  std::size_t row{0};
  std::string message;
};

struct ParseResult
{
  std::vector<Sample> samples;
  std::vector<RowDiagnostic> diagnostics;
};

/// Parse a CSV table with a header row into canonical samples. Rows whose
/// mandatory fields do not parse are skipped and reported.
ParseResult parse_telemetry(std::string_view bytes, const ColumnMap & column_map);

struct SplitOptions
{
  double min_duration_s{60.0};
};

struct SplitResult
{
  std::vector<TripRecord> trips;
  std::size_t dropped{0};
};

/// One trip per maximal run of ignition-on samples.
SplitResult split_trips(std::span<const Sample> samples, const SplitOptions & options = {});

struct DeriveOptions
{
  bool resample_1hz{false};
};

/// Fill accel (forward difference, last value repeated) and dist (left
/// rectangle); optionally resample onto a 1 s grid first.
TripRecord derive_signals(TripRecord trip, const DeriveOptions & options = {});

/// Linear interpolation onto t0, t0 + period, ...; pedal and ignition
/// channels are held from the preceding sample.
std::vector<Sample> resample(std::span<const Sample> samples, double period);

/// Median sample period.
double nominal_period(std::span<const Sample> samples);

}  // namespace trajseg::ingest

#endif  // TRAJSEG__INGEST_HPP_
