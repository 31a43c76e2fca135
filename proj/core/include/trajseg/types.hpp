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

#ifndef TRAJSEG__TYPES_HPP_
#define TRAJSEG__TYPES_HPP_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajseg
{

/// Sample index into a trip. Intervals are always expressed in indices;
/// timestamps are looked up from the owning trip.
using Index = std::size_t;

/// One telemetry record in canonical units (s, m/s, deg/s, m, l/h).
struct Sample
{
  double t{0.0};
  double v{0.0};
  /// Raw actuation level; any value > 0 counts as pressed.
  std::optional<double> brake_pedal;
  std::optional<double> accel_pedal;
  std::optional<double> yaw_rate;
  std::optional<double> fuel_flow;
  /// Gap and preceding-vehicle speed are jointly present or absent.
  std::optional<double> gap;
  std::optional<double> pv_speed;
  std::optional<double> pv_length;
  bool ignition{true};

  bool has_pv() const noexcept { return gap.has_value() && pv_speed.has_value(); }
  bool brake_pressed() const noexcept { return brake_pedal.has_value() && *brake_pedal > 0.0; }
  bool accel_pressed() const noexcept { return accel_pedal.has_value() && *accel_pedal > 0.0; }

  bool operator==(const Sample &) const = default;
};

/// Throws Error(kData) when a sample breaks the value invariants.
void validate(const Sample & sample);

struct TripRecord
{
  std::vector<Sample> samples;
  double dt{1.0};
  std::vector<double> accel;
  std::vector<double> dist;
  std::string vehicle_id;
  std::string trip_id;
  std::string vehicle_model;

  std::size_t size() const noexcept { return samples.size(); }
  /// Index of the final sample.
  Index last() const noexcept { return samples.empty() ? 0 : samples.size() - 1; }
  double duration() const noexcept
  {
    return samples.size() < 2 ? 0.0 : samples.back().t - samples.front().t;
  }
  bool has_derived() const noexcept
  {
    return !samples.empty() && accel.size() == samples.size() && dist.size() == samples.size();
  }

  std::vector<double> speeds() const;
  std::vector<double> times() const;

  bool operator==(const TripRecord &) const = default;
};

/// Local and influential speed extremes of one speed series.
struct ExtremeSet
{
  std::vector<Index> k_min;
  std::vector<Index> k_max;
  std::vector<Index> k_inf_min;
  std::vector<Index> k_inf_max;

  bool operator==(const ExtremeSet &) const = default;
};

/// Throws Error(kContract) when the interleaving invariants do not hold.
void validate(const ExtremeSet & extremes);

enum class ScenarioType { kCrs, kBSnA, kBnA, kA, kB, kCrp };
inline constexpr std::array<ScenarioType, 6> kAllScenarioTypes{
  ScenarioType::kCrs, ScenarioType::kBSnA, ScenarioType::kBnA,
  ScenarioType::kA,   ScenarioType::kB,    ScenarioType::kCrp};

std::string_view to_string(ScenarioType type);
ScenarioType scenario_type_from_string(std::string_view name);

inline bool is_braking(ScenarioType type) noexcept
{
  return type == ScenarioType::kB || type == ScenarioType::kBnA || type == ScenarioType::kBSnA;
}

struct ScenarioParams
{
  double approaching_speed{0.0};
  double perceivable_distance{0.0};
  bool is_turning{false};
  std::optional<double> max_curvature;
  std::optional<double> turning_speed;

  bool operator==(const ScenarioParams &) const = default;
};

struct Scenario
{
  Index k0{0};
  Index kf{0};
  ScenarioType type{ScenarioType::kCrs};
  /// Speed-minimum sample that anchors a braking scenario (influential
  /// minimum for BnA/BSnA, end of the drop for B).
  std::optional<Index> event_k;
  std::optional<ScenarioParams> params;

  bool operator==(const Scenario &) const = default;
};

/// Throws Error(kContract) unless the scenarios are sorted, k0 < kf, abut at
/// shared endpoints and span [0, last] exactly.
void validate_cover(std::span<const Scenario> scenarios, Index last);

enum class RegimeType { kCst, kB, kA };
inline constexpr std::array<RegimeType, 3> kAllRegimeTypes{
  RegimeType::kCst, RegimeType::kB, RegimeType::kA};

std::string_view to_string(RegimeType type);
RegimeType regime_type_from_string(std::string_view name);

struct RegimeParams
{
  double v0{0.0};
  double vf{0.0};
  double distance_m{0.0};
  double duration_s{0.0};
  /// Undefined when the regime covers no distance.
  std::optional<double> aggressiveness;

  bool operator==(const RegimeParams &) const = default;
};

struct Regime
{
  Index k0{0};
  Index kf{0};
  RegimeType type{RegimeType::kCst};
  RegimeParams params;

  bool operator==(const Regime &) const = default;
};

enum class RiskLevel { kNoPV, kFadingAway, kClosingIn, kUrgent, kForced, kCritical };
inline constexpr std::array<RiskLevel, 6> kAllRiskLevels{
  RiskLevel::kNoPV,   RiskLevel::kFadingAway, RiskLevel::kClosingIn,
  RiskLevel::kUrgent, RiskLevel::kForced,     RiskLevel::kCritical};

std::string_view to_string(RiskLevel level);
RiskLevel risk_level_from_string(std::string_view name);

}  // namespace trajseg

#endif  // TRAJSEG__TYPES_HPP_
