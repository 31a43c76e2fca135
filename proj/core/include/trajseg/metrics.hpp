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

#ifndef TRAJSEG__METRICS_HPP_
#define TRAJSEG__METRICS_HPP_

#include "trajseg/config.hpp"
#include "trajseg/stats.hpp"
#include "trajseg/types.hpp"

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace trajseg::metrics
{

inline constexpr double kLitersPerUsGallon = 3.785411784;
inline constexpr double kMetersPerMile = 1609.344;

/// Time to collision in seconds. nullopt when no preceding vehicle is
/// tracked; +infinity when the ego vehicle is not closing in.
std::optional<double> ttc(const Sample & sample, const MetricsConfig & config = {});

RiskLevel classify_risk(const Sample & sample, const MetricsConfig & config = {});

struct CutInEvent
{
  Index k{0};
  std::optional<double> gap_before;
  double gap_after{0.0};
  /// v_p - v at the detection sample.
  double relative_speed{0.0};
  double approach_speed{0.0};
};

std::vector<CutInEvent> detect_cut_ins(const TripRecord & trip, const MetricsConfig & config = {});

/// Time integral of a^2 (left rectangle) divided by the covered distance in
/// km. `accel` and `dt` are per-step; nullopt when distance_m <= 0.
std::optional<double> aggressiveness(
  std::span<const double> accel, std::span<const double> dt, double distance_m);

/// Aggressiveness of trip samples [k0, kf].
std::optional<double> aggressiveness(const TripRecord & trip, Index k0, Index kf);

/// |yaw rate| / v in 1/m; nullopt below the speed floor or without yaw.
std::optional<double> curvature(const Sample & sample, const MetricsConfig & config = {});

/// Requires a braking scenario type; Error(kNotApplicable) otherwise.
ScenarioParams scenario_params(
  const Scenario & scenario, const TripRecord & trip, const MetricsConfig & config = {});

struct TripMetrics
{
  double distance_km{0.0};
  double duration_s{0.0};
  double avg_speed_mps{0.0};
  std::size_t braking_events{0};
  std::size_t cutins{0};
  double braking_event_density{0.0};
  double cutin_density{0.0};
  std::optional<double> fuel_economy_mpg;
  std::optional<std::string> fuel_diagnostic;
  std::optional<double> aggressiveness;
  std::map<ScenarioType, double> scenario_distance_fractions;
  std::map<RiskLevel, double> risk_distance_fractions;
};

/// Requires derived signals and a scenario cover of the trip. Distance of
/// step k -> k+1 is attributed to sample k; a boundary sample belongs to the
/// earlier scenario.
TripMetrics trip_metrics(
  const TripRecord & trip, std::span<const Scenario> scenarios,
  std::span<const CutInEvent> cutins, const MetricsConfig & config = {});

/// (curvature, speed) samples inside the turning window of a braking
/// scenario; empty when the scenario is not turning.
std::vector<stats::EnvelopePoint> turning_points(
  const Scenario & scenario, const TripRecord & trip, const MetricsConfig & config = {});

}  // namespace trajseg::metrics

#endif  // TRAJSEG__METRICS_HPP_
