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

#include "trajseg/metrics.hpp"

#include "trajseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace trajseg::metrics
{

std::optional<double> ttc(const Sample & sample, const MetricsConfig & config)
{
  if (!sample.has_pv()) {
    return std::nullopt;
  }
  const double closing = sample.v - *sample.pv_speed;
  if (!(closing > 0.0)) {
    return std::numeric_limits<double>::infinity();
  }
  const double length = sample.pv_length.value_or(config.default_pv_length_m);
  return (*sample.gap - length) / closing;
}

RiskLevel classify_risk(const Sample & sample, const MetricsConfig & config)
{
  if (!sample.has_pv()) {
    return RiskLevel::kNoPV;
  }
  if (sample.v - *sample.pv_speed <= 0.0) {
    return RiskLevel::kFadingAway;
  }
  const double time = *ttc(sample, config);
  if (time >= config.ttc_closing_s) {
    return RiskLevel::kClosingIn;
  }
  if (time >= config.ttc_urgent_s) {
    return RiskLevel::kUrgent;
  }
  if (time >= config.ttc_forced_s) {
    return RiskLevel::kForced;
  }
  return RiskLevel::kCritical;
}

std::vector<CutInEvent> detect_cut_ins(const TripRecord & trip, const MetricsConfig & config)
{
  std::vector<CutInEvent> out;
  const auto & s = trip.samples;
  for (Index k = 0; k + 1 < s.size(); ++k) {
    const Sample & now = s[k];
    const Sample & next = s[k + 1];
    if (!next.has_pv()) {
      continue;
    }
    bool hit = false;
    std::optional<double> before;
    if (!now.has_pv()) {
      hit = true;
    } else {
      const double step = next.t - now.t;
      const double expected = *now.gap + (*now.pv_speed - now.v) * step;
      hit = *next.gap < expected - config.cutin_margin_m;
      before = now.gap;
    }
    if (!hit) {
      continue;
    }
    if (!out.empty() && next.t - s[out.back().k].t <= config.cutin_refractory_s) {
      continue;
    }
    CutInEvent e;
    e.k = k + 1;
    e.gap_before = before;
    e.gap_after = *next.gap;
    e.relative_speed = *next.pv_speed - next.v;
    e.approach_speed = next.v;
    out.push_back(e);
  }
  return out;
}

std::optional<double> aggressiveness(
  std::span<const double> accel, std::span<const double> dt, double distance_m)
{
  if (!(distance_m > 0.0)) {
    return std::nullopt;
  }
  if (accel.size() != dt.size()) {
    throw Error(ErrorKind::kContract, "accel and dt series differ in length");
  }
  double integral = 0.0;
  for (std::size_t k = 0; k < accel.size(); ++k) {
    integral += accel[k] * accel[k] * dt[k];
  }
  return integral / (distance_m / 1000.0);
}

std::optional<double> aggressiveness(const TripRecord & trip, Index k0, Index kf)
{
  if (!trip.has_derived()) {
    throw Error(ErrorKind::kContract, "aggressiveness needs derived signals");
  }
  if (kf > trip.last() || k0 > kf) {
    throw Error(ErrorKind::kContract, "aggressiveness span lies outside the trip");
  }
  std::vector<double> dt;
  dt.reserve(kf - k0);
  for (Index k = k0; k < kf; ++k) {
    dt.push_back(trip.samples[k + 1].t - trip.samples[k].t);
  }
  return aggressiveness(
    std::span<const double>(trip.accel).subspan(k0, kf - k0), dt, trip.dist[kf] - trip.dist[k0]);
}

std::optional<double> curvature(const Sample & sample, const MetricsConfig & config)
{
  if (!sample.yaw_rate || sample.v < config.curvature_min_speed_mps) {
    return std::nullopt;
  }
  return std::abs(*sample.yaw_rate * std::numbers::pi / 180.0) / sample.v;
}

namespace
{

Index event_sample(const Scenario & scenario, const TripRecord & trip)
{
  if (scenario.event_k) {
    return *scenario.event_k;
  }
  Index best = scenario.k0;
  for (Index k = scenario.k0; k <= scenario.kf; ++k) {
    if (trip.samples[k].v < trip.samples[best].v) {
      best = k;
    }
  }
  return best;
}

// Samples within config.turn_window_s of the event sample.
std::pair<Index, Index> event_window(
  const Scenario & scenario, const TripRecord & trip, const MetricsConfig & config)
{
  const Index event = event_sample(scenario, trip);
  const double te = trip.samples[event].t;
  Index lo = event;
  while (lo > 0 && te - trip.samples[lo - 1].t <= config.turn_window_s) {
    --lo;
  }
  Index hi = event;
  while (hi < trip.last() && trip.samples[hi + 1].t - te <= config.turn_window_s) {
    ++hi;
  }
  return {lo, hi};
}

bool window_turning(const TripRecord & trip, Index lo, Index hi, const MetricsConfig & config)
{
  for (Index k = lo; k <= hi; ++k) {
    const auto & yaw = trip.samples[k].yaw_rate;
    if (yaw && std::abs(*yaw) > config.turn_yaw_deg_s) {
      return true;
    }
  }
  return false;
}

void require_braking(const Scenario & scenario, const TripRecord & trip)
{
  if (!is_braking(scenario.type)) {
    throw Error(
      ErrorKind::kNotApplicable,
      "scenario parameters are undefined for " + std::string(to_string(scenario.type)));
  }
  if (!trip.has_derived()) {
    throw Error(ErrorKind::kContract, "scenario parameters need derived signals");
  }
  if (scenario.kf > trip.last() || scenario.k0 >= scenario.kf) {
    throw Error(ErrorKind::kContract, "scenario interval lies outside the trip");
  }
}

}  // namespace

ScenarioParams scenario_params(
  const Scenario & scenario, const TripRecord & trip, const MetricsConfig & config)
{
  require_braking(scenario, trip);
  ScenarioParams p;
  const Index event = event_sample(scenario, trip);
  p.approaching_speed = trip.samples[scenario.k0].v;
  p.perceivable_distance = trip.dist[event] - trip.dist[scenario.k0];

  const auto [lo, hi] = event_window(scenario, trip, config);
  p.is_turning = window_turning(trip, lo, hi, config);
  if (p.is_turning) {
    for (Index k = lo; k <= hi; ++k) {
      const Sample & s = trip.samples[k];
      if (auto c = curvature(s, config)) {
        p.max_curvature = std::max(p.max_curvature.value_or(*c), *c);
      }
      p.turning_speed = std::min(p.turning_speed.value_or(s.v), s.v);
    }
  }
  return p;
}

std::vector<stats::EnvelopePoint> turning_points(
  const Scenario & scenario, const TripRecord & trip, const MetricsConfig & config)
{
  std::vector<stats::EnvelopePoint> out;
  if (!is_braking(scenario.type)) {
    return out;
  }
  require_braking(scenario, trip);
  const auto [lo, hi] = event_window(scenario, trip, config);
  if (!window_turning(trip, lo, hi, config)) {
    return out;
  }
  for (Index k = lo; k <= hi; ++k) {
    auto c = curvature(trip.samples[k], config);
    if (c && *c > 0.0) {
      out.push_back({*c, trip.samples[k].v});
    }
  }
  return out;
}

TripMetrics trip_metrics(
  const TripRecord & trip, std::span<const Scenario> scenarios,
  std::span<const CutInEvent> cutins, const MetricsConfig & config)
{
  if (!trip.has_derived()) {
    throw Error(ErrorKind::kContract, "trip metrics need derived signals");
  }
  validate_cover(scenarios, trip.last());
  const auto & s = trip.samples;
  const std::size_t n = s.size();

  TripMetrics m;
  const double distance_m = trip.dist.back();
  m.distance_km = distance_m / 1000.0;
  m.duration_s = trip.duration();
  m.avg_speed_mps = m.duration_s > 0.0 ? distance_m / m.duration_s : 0.0;

  for (const auto & sc : scenarios) {
    if (sc.type == ScenarioType::kBSnA || sc.type == ScenarioType::kBnA) {
      ++m.braking_events;
    }
  }
  m.cutins = cutins.size();
  if (m.distance_km > 0.0) {
    m.braking_event_density = static_cast<double>(m.braking_events) / m.distance_km;
    m.cutin_density = static_cast<double>(m.cutins) / m.distance_km;
  }

  bool any_fuel = false;
  double liters = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!s[k].fuel_flow) {
      continue;
    }
    any_fuel = true;
    if (k + 1 < n) {
      liters += *s[k].fuel_flow / 3600.0 * (s[k + 1].t - s[k].t);
    }
  }
  if (!any_fuel) {
    m.fuel_diagnostic = "fuel flow channel absent";
  } else if (!(liters > 0.0)) {
    m.fuel_diagnostic = "no fuel consumed; economy is unbounded";
  } else {
    const double gallons = liters / kLitersPerUsGallon;
    m.fuel_economy_mpg = (distance_m / kMetersPerMile) / gallons;
  }

  m.aggressiveness = aggressiveness(trip, 0, trip.last());

  if (distance_m > 0.0) {
    std::map<ScenarioType, double> by_type;
    std::map<RiskLevel, double> by_risk;
    std::size_t owner = 0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      while (k >= scenarios[owner].kf) {
        ++owner;
      }
      const double d = s[k].v * (s[k + 1].t - s[k].t);
      by_type[scenarios[owner].type] += d;
      by_risk[classify_risk(s[k], config)] += d;
    }
    for (const auto & [type, d] : by_type) {
      m.scenario_distance_fractions[type] = d / distance_m;
    }
    for (const auto & [level, d] : by_risk) {
      m.risk_distance_fractions[level] = d / distance_m;
    }
  }
  return m;
}

}  // namespace trajseg::metrics
