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

#include "trajseg/regimes.hpp"

#include "trajseg/error.hpp"
#include "trajseg/metrics.hpp"

#include <cmath>
#include <string>

namespace trajseg::regimes
{

RegimeParams regime_params(const TripRecord & trip, Index k0, Index kf)
{
  RegimeParams p;
  p.v0 = trip.samples[k0].v;
  p.vf = trip.samples[kf].v;
  p.distance_m = trip.dist[kf] - trip.dist[k0];
  p.duration_s = trip.samples[kf].t - trip.samples[k0].t;
  p.aggressiveness = metrics::aggressiveness(trip, k0, kf);
  return p;
}

namespace
{

bool any_channel(const TripRecord & trip, Index k0, Index kf, std::optional<double> Sample::*channel)
{
  for (Index k = k0; k <= kf; ++k) {
    if ((trip.samples[k].*channel).has_value()) {
      return true;
    }
  }
  return false;
}

Regime make(const TripRecord & trip, Index k0, Index kf, RegimeType type)
{
  return Regime{k0, kf, type, regime_params(trip, k0, kf)};
}

}  // namespace

std::vector<Regime> isolate_regimes(
  const Scenario & scenario, const TripRecord & trip, const RegimeConfig & config)
{
  const ScenarioType type = scenario.type;
  if (type == ScenarioType::kCrs || type == ScenarioType::kCrp) {
    throw Error(
      ErrorKind::kNotApplicable,
      "regimes are undefined for " + std::string(to_string(type)) + " scenarios");
  }
  if (!trip.has_derived()) {
    throw Error(ErrorKind::kContract, "regime isolation needs derived signals");
  }
  const Index k0 = scenario.k0;
  const Index kf = scenario.kf;
  if (!(k0 < kf) || kf > trip.last()) {
    throw Error(ErrorKind::kContract, "scenario interval lies outside the trip");
  }

  const bool braking = is_braking(type);
  const bool has_accel_pedal = any_channel(trip, k0, kf, &Sample::accel_pedal);
  if (!has_accel_pedal && !config.pedal_proxy) {
    throw Error(ErrorKind::kMissingSignal, "accelerator pedal channel is absent");
  }
  if (braking && !any_channel(trip, k0, kf, &Sample::brake_pedal)) {
    throw Error(ErrorKind::kMissingSignal, "brake pedal channel is absent");
  }

  const auto & s = trip.samples;
  auto accelerating = [&](Index k) {
    return has_accel_pedal ? s[k].accel_pressed() : trip.accel[k] > 0.0;
  };
  auto released = [&](Index k) {
    return !s[k].brake_pressed() && (has_accel_pedal ? !s[k].accel_pressed() : trip.accel[k] <= 0.0);
  };

  std::vector<Regime> out;
  Index accel_from = k0;

  if (braking) {
    const Index bottom = scenario.event_k.value_or(kf);
    std::optional<Index> brake_on;
    for (Index k = k0; k <= kf; ++k) {
      if (s[k].brake_pressed()) {
        brake_on = k;
        break;
      }
    }
    accel_from = bottom;
    if (brake_on) {
      for (Index k = k0; k < *brake_on; ++k) {
        if (released(k)) {
          out.push_back(make(trip, k, *brake_on, RegimeType::kCst));
          break;
        }
      }
      const double floor_speed = s[bottom].v;
      Index brake_off = bottom;
      for (Index k = *brake_on; k <= kf; ++k) {
        if (s[k].v <= floor_speed) {
          brake_off = k;
          break;
        }
      }
      if (*brake_on < brake_off) {
        out.push_back(make(trip, *brake_on, brake_off, RegimeType::kB));
        accel_from = brake_off;
      }
    }
  }

  if (type != ScenarioType::kB) {
    std::optional<Index> gas_on;
    for (Index k = accel_from; k < kf; ++k) {
      if (accelerating(k)) {
        gas_on = k;
        break;
      }
    }
    if (gas_on) {
      const double target = s[kf].v;
      Index settled = kf;
      for (Index k = *gas_on + 1; k <= kf; ++k) {
        if (
          std::abs(s[k].v - target) <= config.speed_margin_mps &&
          trip.accel[k] < config.accel_settle_mps2) {
          settled = k;
          break;
        }
      }
      out.push_back(make(trip, *gas_on, settled, RegimeType::kA));
    }
  }
  return out;
}

}  // namespace trajseg::regimes
