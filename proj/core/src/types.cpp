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

#include "trajseg/types.hpp"

#include "trajseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace trajseg
{

namespace
{

bool finite_or_absent(const std::optional<double> & value)
{
  return !value || std::isfinite(*value);
}

}  // namespace

void validate(const Sample & sample)
{
  if (!std::isfinite(sample.t) || !std::isfinite(sample.v)) {
    throw Error(ErrorKind::kData, "sample time and speed must be finite");
  }
  if (sample.v < 0.0) {
    throw Error(ErrorKind::kData, "speed must be >= 0");
  }
  if (sample.gap.has_value() != sample.pv_speed.has_value()) {
    throw Error(ErrorKind::kData, "gap and pv_speed must be jointly present");
  }
  if (sample.gap && !(*sample.gap > 0.0)) {
    throw Error(ErrorKind::kData, "gap must be > 0");
  }
  if (sample.fuel_flow && *sample.fuel_flow < 0.0) {
    throw Error(ErrorKind::kData, "fuel_flow must be >= 0");
  }
  if (
    !finite_or_absent(sample.brake_pedal) || !finite_or_absent(sample.accel_pedal) ||
    !finite_or_absent(sample.yaw_rate) || !finite_or_absent(sample.fuel_flow) ||
    !finite_or_absent(sample.gap) || !finite_or_absent(sample.pv_speed) ||
    !finite_or_absent(sample.pv_length)) {
    throw Error(ErrorKind::kData, "optional channels must be finite when present");
  }
}

std::vector<double> TripRecord::speeds() const
{
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto & s : samples) {
    out.push_back(s.v);
  }
  return out;
}

std::vector<double> TripRecord::times() const
{
  std::vector<double> out;
  out.reserve(samples.size());
  for (const auto & s : samples) {
    out.push_back(s.t);
  }
  return out;
}

void validate(const ExtremeSet & extremes)
{
  if (extremes.k_inf_min.size() != extremes.k_inf_max.size()) {
    throw Error(ErrorKind::kContract, "influential extreme lists differ in length");
  }
  auto contains = [](const std::vector<Index> & sorted, Index k) {
    return std::binary_search(sorted.begin(), sorted.end(), k);
  };
  for (std::size_t i = 0; i < extremes.k_inf_min.size(); ++i) {
    const Index mx = extremes.k_inf_max[i];
    const Index mn = extremes.k_inf_min[i];
    if (!contains(extremes.k_max, mx) || !contains(extremes.k_min, mn)) {
      throw Error(ErrorKind::kContract, "influential extreme is not a local extreme");
    }
    if (!(mx < mn)) {
      throw Error(ErrorKind::kContract, "influential maximum must precede its minimum");
    }
    if (i + 1 < extremes.k_inf_min.size() && !(mn < extremes.k_inf_max[i + 1])) {
      throw Error(ErrorKind::kContract, "influential pairs must interleave");
    }
  }
}

void validate_cover(std::span<const Scenario> scenarios, Index last)
{
  if (scenarios.empty()) {
    throw Error(ErrorKind::kContract, "scenario cover is empty");
  }
  if (scenarios.front().k0 != 0 || scenarios.back().kf != last) {
    throw Error(ErrorKind::kContract, "scenario cover does not span the trip");
  }
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (!(scenarios[i].k0 < scenarios[i].kf)) {
      throw Error(ErrorKind::kContract, "scenario " + std::to_string(i) + " has k0 >= kf");
    }
    if (i > 0 && scenarios[i].k0 != scenarios[i - 1].kf) {
      throw Error(
        ErrorKind::kContract, "scenario " + std::to_string(i) + " does not abut its predecessor");
    }
  }
}

std::string_view to_string(ScenarioType type)
{
  switch (type) {
    case ScenarioType::kCrs:
      return "Crs";
    case ScenarioType::kBSnA:
      return "BSnA";
    case ScenarioType::kBnA:
      return "BnA";
    case ScenarioType::kA:
      return "A";
    case ScenarioType::kB:
      return "B";
    case ScenarioType::kCrp:
      return "Crp";
  }
  return "?";
}

ScenarioType scenario_type_from_string(std::string_view name)
{
  for (auto type : kAllScenarioTypes) {
    if (to_string(type) == name) {
      return type;
    }
  }
  throw Error(ErrorKind::kSchema, "unknown scenario type '" + std::string(name) + "'");
}

std::string_view to_string(RegimeType type)
{
  switch (type) {
    case RegimeType::kCst:
      return "Cst";
    case RegimeType::kB:
      return "B";
    case RegimeType::kA:
      return "A";
  }
  return "?";
}

RegimeType regime_type_from_string(std::string_view name)
{
  for (auto type : kAllRegimeTypes) {
    if (to_string(type) == name) {
      return type;
    }
  }
  throw Error(ErrorKind::kSchema, "unknown regime type '" + std::string(name) + "'");
}

std::string_view to_string(RiskLevel level)
{
  switch (level) {
    case RiskLevel::kNoPV:
      return "NoPV";
    case RiskLevel::kFadingAway:
      return "FadingAway";
    case RiskLevel::kClosingIn:
      return "ClosingIn";
    case RiskLevel::kUrgent:
      return "Urgent";
    case RiskLevel::kForced:
      return "Forced";
    case RiskLevel::kCritical:
      return "Critical";
  }
  return "?";
}

RiskLevel risk_level_from_string(std::string_view name)
{
  for (auto level : kAllRiskLevels) {
    if (to_string(level) == name) {
      return level;
    }
  }
  throw Error(ErrorKind::kSchema, "unknown risk level '" + std::string(name) + "'");
}

}  // namespace trajseg
