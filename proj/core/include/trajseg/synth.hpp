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

#ifndef TRAJSEG__SYNTH_HPP_
#define TRAJSEG__SYNTH_HPP_

#include "trajseg/config.hpp"
#include "trajseg/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace trajseg::synth
{

inline constexpr double kMaxAccelMagnitude = 5.0;
inline constexpr double kMaxSpeed = 35.0;

struct PvProfile
{
  bool present{false};
  /// Time headway used to place the preceding vehicle.
  double headway_s{2.0};
  /// Seconds into the item at which a vehicle cuts in (headway drops to a
  /// third); negative disables.
  double cut_in_at_s{-1.0};
  double length_m{4.8};

  bool operator==(const PvProfile &) const = default;
};

/// One scenario of a plan. Which fields matter depends on the type:
///
///  - Crs: hold the entry speed for duration_s (shaped by cruise_shape_mps
///    so that neighbouring events have well-defined extremes).
///  - Crp: from standstill, wait stop_duration_s, then launch to target_speed
///    and cruise duration_s; with target_speed == 0, cruise duration_s at the
///    entry speed, brake to a stop and wait stop_duration_s.
///  - BSnA: coast, brake to a stop, wait stop_duration_s, accelerate to
///    target_speed.
///  - BnA: coast, brake to low_speed, dwell dwell_s, accelerate to
///    target_speed.
///  - B: coast, brake to target_speed.  A: accelerate to target_speed.
struct PlanItem
{
  ScenarioType type{ScenarioType::kCrs};
  double target_speed{0.0};
  double duration_s{0.0};
  double stop_duration_s{0.0};
  double low_speed{0.0};
  double dwell_s{0.0};
  double accel{1.5};
  double decel{2.0};
  double coast_s{0.0};
  double coast_decel{0.4};
  /// Peak |yaw rate| around the speed minimum; 0 drives straight.
  double yaw_peak_deg_s{0.0};
  PvProfile pv;

  bool operator==(const PlanItem &) const = default;
};

struct ScenarioPlan
{
  double initial_speed{0.0};
  std::vector<PlanItem> items;
  double noise_sigma{0.0};
  double dt{1.0};
  std::string vehicle_model{"synthetic"};

  bool operator==(const ScenarioPlan &) const = default;
};

/// Throws Error(kPlan) naming the first offending item when the plan is not
/// physically realizable or its item sequence cannot be told apart.
void validate_plan(const ScenarioPlan & plan);

struct RenderedTrip
{
  TripRecord trip;
  std::vector<Scenario> scenarios;
  /// Ground-truth regimes per scenario (empty for Crs/Crp).
  std::vector<std::vector<Regime>> regimes;
};

/// Piecewise constant-acceleration rendering at plan.dt with pedal, yaw,
/// fuel and preceding-vehicle channels. Deterministic for (plan, seed).
RenderedTrip render_trip(
  const ScenarioPlan & plan, std::uint64_t seed, const SynthConfig & config = {});

struct GeneratorConfig
{
  int min_scenarios{2};
  int max_scenarios{30};
  double min_speed{0.0};
  double max_speed{30.0};
  double min_cruise_s{15.0};
  double max_cruise_s{90.0};
  double min_accel{1.2};
  double max_accel{2.5};
  double min_decel{1.5};
  double max_decel{3.0};
  double noise_sigma{0.0};
  /// Bounds on the number of BSnA items.
  int min_bsna{0};
  int max_bsna{1'000};
  double p_start_at_rest{0.7};
  double p_end_at_rest{0.6};
  double p_pv{0.5};
  double p_turn{0.3};
  double p_coast{0.5};
};

ScenarioPlan random_plan(const GeneratorConfig & config, std::uint64_t seed);

std::string plan_to_json(const ScenarioPlan & plan);
ScenarioPlan plan_from_json(std::string_view json_text);

/// Token accuracy 1 - edit_distance / max(len) between two type sequences;
/// 1 when both are empty.
double sequence_accuracy(std::span<const ScenarioType> truth, std::span<const ScenarioType> got);

std::vector<ScenarioType> types_of(std::span<const Scenario> scenarios);

/// Deterministic per-item seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace trajseg::synth

#endif  // TRAJSEG__SYNTH_HPP_
