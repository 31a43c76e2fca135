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

#include "trajseg/synth.hpp"

#include "trajseg/error.hpp"
#include "trajseg/ingest.hpp"
#include "trajseg/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include <json.hpp>

namespace trajseg::synth
{

using nlohmann::json;

namespace
{

// Smallest speed change a plan may ask of a drop or rise, and the lowest
// speed a moving scenario may settle at.
constexpr double kMinSpeedChange = 7.0;
constexpr double kMinMovingSpeed = 3.0;
constexpr double kMinCruise_s = 10.0;
constexpr double kMaxDwell_s = 3.0;
constexpr double kYawHalfWidth_s = 4.0;

enum class Phase { kCruise, kAccel, kBrake, kCoast, kStop, kDwell, kRest };

enum class Direction { kNone, kDrop, kRise };

Direction start_direction(const PlanItem & item)
{
  switch (item.type) {
    case ScenarioType::kB:
    case ScenarioType::kBSnA:
    case ScenarioType::kBnA:
      return Direction::kDrop;
    case ScenarioType::kA:
      return Direction::kRise;
    default:
      return Direction::kNone;
  }
}

Direction end_direction(const PlanItem & item, bool first)
{
  switch (item.type) {
    case ScenarioType::kB:
      return Direction::kDrop;
    case ScenarioType::kBSnA:
    case ScenarioType::kBnA:
    case ScenarioType::kA:
      return Direction::kRise;
    case ScenarioType::kCrp:
      return first ? Direction::kRise : Direction::kNone;
    default:
      return Direction::kNone;
  }
}

// Cruise shapes keep the bounding extremes where the segmenter expects them:
// a rise must end on a maximum, a drop on a minimum.
enum class Shape { kFlat, kClimb, kDescend, kSag, kHump };

Shape cruise_shape(Direction before, Direction after)
{
  if (after == Direction::kDrop) {
    return before == Direction::kRise ? Shape::kSag : Shape::kClimb;
  }
  if (after == Direction::kRise) {
    return before == Direction::kDrop ? Shape::kHump : Shape::kDescend;
  }
  return Shape::kFlat;
}

double shape_exit(Shape shape, double entry, double s)
{
  switch (shape) {
    case Shape::kClimb:
    case Shape::kSag:
      return entry + s;
    case Shape::kDescend:
      return entry - s;
    default:
      return entry;
  }
}

Direction neighbour_after(const ScenarioPlan & plan, std::size_t i)
{
  return i + 1 < plan.items.size() ? start_direction(plan.items[i + 1]) : Direction::kNone;
}

Direction neighbour_before(const ScenarioPlan & plan, std::size_t i)
{
  return i == 0 ? Direction::kNone : end_direction(plan.items[i - 1], i - 1 == 0);
}

[[noreturn]] void reject(std::size_t i, const PlanItem & item, const std::string & why)
{
  throw Error(
    ErrorKind::kPlan,
    "plan item " + std::to_string(i) + " (" + std::string(to_string(item.type)) + "): " + why);
}

// Piecewise-linear speed trace with one phase tag per step k -> k+1.
struct Trace
{
  double dt{1.0};
  std::vector<double> v;
  std::vector<Phase> phase;

  Index now() const { return v.size() - 1; }
  double speed() const { return v.back(); }

  void steps_to(double target, std::size_t n, Phase p)
  {
    const double start = speed();
    for (std::size_t i = 1; i <= n; ++i) {
      v.push_back(i == n ? target : start + (target - start) * static_cast<double>(i) / static_cast<double>(n));
      phase.push_back(p);
    }
  }

  void ramp(double target, double rate, Phase p)
  {
    const double dv = std::abs(target - speed());
    if (dv == 0.0) {
      return;
    }
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(dv / rate / dt - 1e-9)));
    steps_to(target, n, p);
  }

  std::size_t count(double duration) const
  {
    return static_cast<std::size_t>(std::max(0.0, std::round(duration / dt)));
  }

  void hold(double duration, Phase p) { steps_to(speed(), count(duration), p); }

  void glide(double target, double duration, Phase p)
  {
    steps_to(target, std::max<std::size_t>(1, count(duration)), p);
  }

  void cruise(Shape shape, double duration, double s, Phase p = Phase::kCruise)
  {
    const double level = speed();
    const std::size_t n = std::max<std::size_t>(2, count(duration));
    const std::size_t half = n / 2;
    switch (shape) {
      case Shape::kFlat:
        steps_to(level, n, p);
        break;
      case Shape::kClimb:
        steps_to(level + s, n, p);
        break;
      case Shape::kDescend:
        steps_to(level - s, n, p);
        break;
      case Shape::kSag:
        steps_to(level - s, half, p);
        steps_to(level + s, n - half, p);
        break;
      case Shape::kHump:
        steps_to(level + s, half, p);
        steps_to(level, n - half, p);
        break;
    }
  }
};

struct ItemSpan
{
  Index k0{0};
  Index kf{0};
  std::optional<Index> bottom;
  std::optional<Index> coast_on;
  std::optional<Index> brake_on;
  std::optional<Index> brake_off;
  std::optional<Index> gas_on;
};

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream)
{
  return splitmix64(splitmix64(seed) ^ (stream * 0xD1B54A32D192ED03ULL));
}

void validate_plan(const ScenarioPlan & plan)
{
  if (!(plan.dt > 0.0) || !std::isfinite(plan.dt)) {
    throw Error(ErrorKind::kPlan, "plan dt must be > 0");
  }
  if (!(plan.noise_sigma >= 0.0) || !std::isfinite(plan.noise_sigma)) {
    throw Error(ErrorKind::kPlan, "plan noise_sigma must be >= 0");
  }
  if (!(plan.initial_speed >= 0.0) || plan.initial_speed > kMaxSpeed) {
    throw Error(ErrorKind::kPlan, "plan initial_speed must lie in [0, 35] m/s");
  }
  const auto & items = plan.items;
  if (items.size() < 2) {
    throw Error(ErrorKind::kPlan, "a plan needs at least 2 items");
  }

  const double s = 1.0;
  double cur = plan.initial_speed;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const PlanItem & it = items[i];
    const bool last = i + 1 == items.size();
    const ScenarioType prev = i > 0 ? items[i - 1].type : ScenarioType::kCrp;
    const ScenarioType next = last ? ScenarioType::kCrp : items[i + 1].type;
    const bool prev_rises = i > 0 && end_direction(items[i - 1], i - 1 == 0) == Direction::kRise;

    for (double x : {it.target_speed, it.duration_s, it.stop_duration_s, it.low_speed, it.dwell_s,
                     it.coast_s, it.coast_decel, it.yaw_peak_deg_s}) {
      if (!std::isfinite(x) || x < 0.0) {
        reject(i, it, "numeric fields must be finite and >= 0");
      }
    }
    if (!(it.accel > 0.0 && it.accel <= kMaxAccelMagnitude) ||
        !(it.decel > 0.0 && it.decel <= kMaxAccelMagnitude)) {
      reject(i, it, "accel and decel must lie in (0, 5] m/s^2");
    }
    if (it.coast_decel > 1.0) {
      reject(i, it, "coast_decel must be <= 1 m/s^2");
    }
    if (it.pv.present && (!(it.pv.headway_s > 0.0) || !(it.pv.length_m > 0.0))) {
      reject(i, it, "preceding vehicle needs headway_s > 0 and length_m > 0");
    }
    const double coast_loss = it.coast_decel * it.coast_s;

    switch (it.type) {
      case ScenarioType::kCrs: {
        if (it.duration_s < kMinCruise_s) {
          reject(i, it, "cruise duration must be >= 10 s");
        }
        if (i == 0 && plan.initial_speed < kMinMovingSpeed) {
          reject(i, it, "a leading Crs needs initial_speed >= 3 m/s");
        }
        if (i > 0 && (prev == ScenarioType::kCrs || prev == ScenarioType::kCrp)) {
          reject(i, it, "Crs cannot follow Crs or Crp; they would merge");
        }
        if (!last && (next == ScenarioType::kCrs || next == ScenarioType::kCrp)) {
          reject(i, it, "Crs cannot precede Crs or Crp; they would merge");
        }
        if (cur < kMinMovingSpeed) {
          reject(i, it, "cruise speed must be >= 3 m/s");
        }
        const Shape shape = cruise_shape(neighbour_before(plan, i), neighbour_after(plan, i));
        if (cur + s > kMaxSpeed) {
          reject(i, it, "cruise exceeds 35 m/s");
        }
        cur = shape_exit(shape, cur, s);
        break;
      }
      case ScenarioType::kCrp: {
        if (i == 0) {
          if (plan.initial_speed != 0.0) {
            reject(i, it, "a leading Crp starts at rest (initial_speed 0)");
          }
          if (it.target_speed < kMinSpeedChange || it.target_speed + s > kMaxSpeed) {
            reject(i, it, "launch target must lie in [7, 34] m/s");
          }
          if (it.duration_s < kMinCruise_s) {
            reject(i, it, "cruise after launch must be >= 10 s");
          }
          if (!last && start_direction(items[i + 1]) != Direction::kDrop) {
            reject(i, it, "a launch must be followed by B, BnA or BSnA");
          }
          const Shape shape = cruise_shape(Direction::kRise, neighbour_after(plan, i));
          cur = shape_exit(shape, it.target_speed, s);
        } else {
          if (!last) {
            reject(i, it, "Crp is only allowed as the first or last item");
          }
          if (!prev_rises) {
            reject(i, it, "a closing Crp must follow BSnA, BnA or A");
          }
          if (it.duration_s < 2.0 * plan.dt) {
            reject(i, it, "closing cruise must last >= 2 samples");
          }
          if (cur - s <= 0.0) {
            reject(i, it, "closing cruise speed too low");
          }
          cur = 0.0;
        }
        break;
      }
      case ScenarioType::kBSnA:
      case ScenarioType::kBnA:
      case ScenarioType::kB: {
        if (i > 0 && (prev == ScenarioType::kB || (prev == ScenarioType::kCrp && i - 1 != 0))) {
          reject(i, it, "a drop cannot directly follow B or a closing Crp");
        }
        if (i == 0) {
          reject(i, it, "a plan must open with Crs or Crp");
        }
        const double floor_speed = it.type == ScenarioType::kBSnA ? 0.0
                                   : it.type == ScenarioType::kBnA ? it.low_speed
                                                                   : it.target_speed;
        if (it.type != ScenarioType::kBSnA && floor_speed < kMinMovingSpeed) {
          reject(i, it, "non-stop minimum must be >= 3 m/s");
        }
        if (cur - floor_speed < kMinSpeedChange) {
          reject(i, it, "drop must be >= 7 m/s");
        }
        if (cur - coast_loss <= floor_speed + 0.5) {
          reject(i, it, "coasting leaves no room for braking");
        }
        if (it.type == ScenarioType::kB) {
          if (last || next != ScenarioType::kCrs || i + 2 >= items.size() ||
              items[i + 2].type == ScenarioType::kCrs || items[i + 2].type == ScenarioType::kCrp) {
            reject(i, it, "B must be followed by Crs and then B, BnA, BSnA or A");
          }
          cur = it.target_speed;
        } else {
          if (it.type == ScenarioType::kBnA && it.dwell_s > kMaxDwell_s) {
            reject(i, it, "BnA dwell must be <= 3 s");
          }
          if (it.target_speed - floor_speed < kMinSpeedChange || it.target_speed > kMaxSpeed - s) {
            reject(i, it, "rise must be >= 7 m/s and end <= 34 m/s");
          }
          cur = it.target_speed;
        }
        break;
      }
      case ScenarioType::kA: {
        if (i < 2 || prev != ScenarioType::kCrs ||
            start_direction(items[i - 2]) == Direction::kNone) {
          reject(i, it, "A must follow Crs preceded by B, BnA, BSnA or A");
        }
        if (it.target_speed - cur < kMinSpeedChange || it.target_speed > kMaxSpeed - s) {
          reject(i, it, "rise must be >= 7 m/s and end <= 34 m/s");
        }
        cur = it.target_speed;
        break;
      }
    }
  }
  const ScenarioType tail = items.back().type;
  if (tail != ScenarioType::kCrs && !(tail == ScenarioType::kCrp && items.size() > 1)) {
    reject(items.size() - 1, items.back(), "a plan must close with Crs or Crp");
  }
}

RenderedTrip render_trip(const ScenarioPlan & plan, std::uint64_t seed, const SynthConfig & config)
{
  validate_plan(plan);
  const double s = config.cruise_shape_mps;

  Trace tr;
  tr.dt = plan.dt;
  tr.v.push_back(plan.initial_speed);
  std::vector<ItemSpan> spans;
  spans.reserve(plan.items.size());

  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    const PlanItem & it = plan.items[i];
    ItemSpan span;
    span.k0 = tr.now();
    auto coast = [&]() {
      if (it.coast_s > 0.0 && it.coast_decel > 0.0) {
        span.coast_on = tr.now();
        tr.glide(tr.speed() - it.coast_decel * it.coast_s, it.coast_s, Phase::kCoast);
      }
    };
    auto brake = [&](double floor_speed) {
      span.brake_on = tr.now();
      tr.ramp(floor_speed, it.decel, Phase::kBrake);
      span.brake_off = tr.now();
      span.bottom = tr.now();
    };
    auto launch = [&](double target) {
      span.gas_on = tr.now();
      tr.ramp(target, it.accel, Phase::kAccel);
    };

    switch (it.type) {
      case ScenarioType::kCrs:
        tr.cruise(
          cruise_shape(neighbour_before(plan, i), neighbour_after(plan, i)), it.duration_s, s);
        break;
      case ScenarioType::kCrp:
        if (i == 0) {
          tr.hold(it.stop_duration_s, Phase::kRest);
          tr.ramp(it.target_speed, it.accel, Phase::kAccel);
          tr.cruise(cruise_shape(Direction::kRise, neighbour_after(plan, i)), it.duration_s, s);
        } else {
          tr.cruise(Shape::kDescend, it.duration_s, s);
          tr.ramp(0.0, it.decel, Phase::kBrake);
          tr.hold(std::max(it.stop_duration_s, plan.dt), Phase::kStop);
        }
        break;
      case ScenarioType::kBSnA:
        coast();
        brake(0.0);
        tr.hold(it.stop_duration_s, Phase::kStop);
        launch(it.target_speed);
        break;
      case ScenarioType::kBnA:
        coast();
        brake(it.low_speed);
        tr.hold(it.dwell_s, Phase::kDwell);
        launch(it.target_speed);
        break;
      case ScenarioType::kB:
        coast();
        brake(it.target_speed);
        break;
      case ScenarioType::kA:
        span.bottom = tr.now();
        launch(it.target_speed);
        break;
    }
    span.kf = tr.now();
    spans.push_back(span);
  }

  const std::size_t n = tr.v.size();
  tr.phase.push_back(tr.phase.empty() ? Phase::kCruise : tr.phase.back());

  std::mt19937_64 noise_rng(derive_seed(seed, 1));
  std::mt19937_64 pedal_rng(derive_seed(seed, 2));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  TripRecord trip;
  trip.vehicle_model = plan.vehicle_model;
  trip.samples.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    Sample & smp = trip.samples[k];
    smp.t = static_cast<double>(k) * plan.dt;
    double v = tr.v[k];
    if (plan.noise_sigma > 0.0 && v > 0.0) {
      v = std::max(0.0, v + plan.noise_sigma * gauss(noise_rng));
    }
    smp.v = v;
    const Phase p = tr.phase[k];
    const bool brake = p == Phase::kBrake || p == Phase::kStop || p == Phase::kRest;
    const bool gas = p == Phase::kAccel || p == Phase::kCruise;
    double brake_level = brake ? config.brake_pedal_level : 0.0;
    double gas_level =
      p == Phase::kAccel ? config.accel_pedal_level : (gas ? config.cruise_pedal_level : 0.0);
    if (config.pedal_flip_prob > 0.0) {
      if (unit(pedal_rng) < config.pedal_flip_prob) {
        brake_level = brake_level > 0.0 ? 0.0 : config.brake_pedal_level;
      }
      if (unit(pedal_rng) < config.pedal_flip_prob) {
        gas_level = gas_level > 0.0 ? 0.0 : config.cruise_pedal_level;
      }
    }
    smp.brake_pedal = brake_level;
    smp.accel_pedal = gas_level;
    smp.yaw_rate = 0.0;
    smp.ignition = true;
  }

  // Yaw pulses around each item's speed minimum.
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    const PlanItem & it = plan.items[i];
    if (it.yaw_peak_deg_s <= 0.0) {
      continue;
    }
    const Index center = spans[i].bottom.value_or((spans[i].k0 + spans[i].kf) / 2);
    const double tc = trip.samples[center].t;
    for (auto & smp : trip.samples) {
      const double w = 1.0 - std::abs(smp.t - tc) / kYawHalfWidth_s;
      if (w > 0.0) {
        *smp.yaw_rate += it.yaw_peak_deg_s * w;
      }
    }
  }

  // Preceding vehicle held at a time headway; a cut-in swaps in a closer
  // vehicle whose speed continues the old one's.
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    const PvProfile & pv = plan.items[i].pv;
    if (!pv.present) {
      continue;
    }
    const Index lo = spans[i].k0;
    const Index hi = spans[i].kf;
    const double t_cut = pv.cut_in_at_s >= 0.0 ? trip.samples[lo].t + pv.cut_in_at_s
                                               : std::numeric_limits<double>::infinity();
    auto headway = [&](Index k) {
      return trip.samples[k].t >= t_cut ? pv.headway_s / 3.0 : pv.headway_s;
    };
    auto gap_at = [&](Index k, double h) { return pv.length_m + 3.0 + h * tr.v[k]; };
    for (Index k = lo; k <= hi; ++k) {
      Sample & smp = trip.samples[k];
      const double h = headway(k);
      smp.gap = gap_at(k, h);
      smp.pv_length = pv.length_m;
      double vp = tr.v[k];
      if (k < hi) {
        vp += (gap_at(k + 1, h) - gap_at(k, h)) / plan.dt;
      }
      smp.pv_speed = std::max(0.0, vp);
    }
  }

  for (std::size_t k = 0; k < n; ++k) {
    const double a = k + 1 < n ? (tr.v[k + 1] - tr.v[k]) / plan.dt : 0.0;
    const double v = tr.v[k];
    trip.samples[k].fuel_flow = 0.6 + 0.05 * v + 0.5 * std::max(0.0, a) * v;
  }

  trip = ingest::derive_signals(std::move(trip));

  RenderedTrip out;
  out.trip = std::move(trip);
  out.regimes.resize(plan.items.size());
  for (std::size_t i = 0; i < plan.items.size(); ++i) {
    const PlanItem & it = plan.items[i];
    const ItemSpan & span = spans[i];
    Scenario sc;
    sc.k0 = span.k0;
    sc.kf = span.kf;
    sc.type = it.type;
    if (is_braking(it.type)) {
      sc.event_k = span.bottom;
    }
    out.scenarios.push_back(sc);

    auto add = [&](Index a, Index b, RegimeType type) {
      if (a < b) {
        out.regimes[i].push_back(Regime{a, b, type, regimes::regime_params(out.trip, a, b)});
      }
    };
    if (is_braking(it.type)) {
      if (span.coast_on) {
        add(*span.coast_on, *span.brake_on, RegimeType::kCst);
      }
      add(*span.brake_on, *span.brake_off, RegimeType::kB);
    }
    if (span.gas_on && it.type != ScenarioType::kCrp) {
      add(*span.gas_on, span.kf, RegimeType::kA);
    }
  }
  return out;
}

ScenarioPlan random_plan(const GeneratorConfig & cfg, std::uint64_t seed)
{
  std::mt19937_64 rng(derive_seed(seed, 0));
  auto uniform = [&](double lo, double hi) {
    if (!(hi > lo)) {
      return lo;
    }
    return std::uniform_real_distribution<double>(lo, hi)(rng);
  };
  auto chance = [&](double p) { return uniform(0.0, 1.0) < p; };
  auto round1 = [](double x) { return std::round(x * 10.0) / 10.0; };

  const double s = 1.0;
  const double top = std::min(cfg.max_speed, kMaxSpeed - 2.0 * s);
  const double cruise_lo = std::max(cfg.min_cruise_s, kMinCruise_s + 5.0);
  const double cruise_hi = std::max(cruise_lo, cfg.max_cruise_s);
  const int budget = std::clamp(
    static_cast<int>(uniform(cfg.min_scenarios, cfg.max_scenarios + 0.999)), 3,
    std::max(3, cfg.max_scenarios));

  ScenarioPlan plan;
  plan.noise_sigma = cfg.noise_sigma;
  auto & items = plan.items;
  double cur = 0.0;

  auto base = [&](ScenarioType type) {
    PlanItem it;
    it.type = type;
    it.accel = round1(uniform(cfg.min_accel, cfg.max_accel));
    it.decel = round1(uniform(cfg.min_decel, cfg.max_decel));
    if (chance(cfg.p_pv)) {
      it.pv.present = true;
      it.pv.headway_s = round1(uniform(1.0, 3.0));
      if (chance(0.3)) {
        it.pv.cut_in_at_s = std::round(uniform(1.0, 5.0));
      }
    }
    return it;
  };
  auto cruise = [&]() {
    PlanItem it = base(ScenarioType::kCrs);
    it.duration_s = std::round(uniform(cruise_lo, cruise_hi));
    return it;
  };
  auto add_coast = [&](PlanItem & it, double floor_speed) {
    if (chance(cfg.p_coast)) {
      it.coast_s = std::round(uniform(2.0, 6.0));
      it.coast_decel = 0.4;
      if (cur - it.coast_s * it.coast_decel <= floor_speed + 1.0) {
        it.coast_s = 0.0;
      }
    }
  };
  auto add_turn = [&](PlanItem & it) {
    if (chance(cfg.p_turn)) {
      it.yaw_peak_deg_s = round1(uniform(6.0, 20.0));
    }
  };

  // Opening.
  if (chance(cfg.p_start_at_rest)) {
    PlanItem it = base(ScenarioType::kCrp);
    it.stop_duration_s = std::round(uniform(2.0, 20.0));
    it.target_speed = round1(uniform(std::max(cfg.min_speed, 15.0), top));
    it.duration_s = std::round(uniform(cruise_lo, cruise_hi));
    items.push_back(it);
    cur = it.target_speed + s;
  } else {
    plan.initial_speed = round1(uniform(std::max(cfg.min_speed, 15.0), top));
    items.push_back(cruise());
    cur = plan.initial_speed + s;
  }

  int bsna = 0;
  const auto room = [&]() { return budget - static_cast<int>(items.size()); };
  bool first_block = true;
  while (first_block || room() >= 3) {
    // Separator from the previous block: shaped cruise or direct adjacency.
    if (!first_block) {
      if (chance(0.7)) {
        items.push_back(cruise());
        cur += s;
      }
    }
    first_block = false;

    // Standalone B prefix.
    while (room() >= 5 && cur >= 15.0 + s && chance(0.25)) {
      PlanItem b = base(ScenarioType::kB);
      b.target_speed = round1(uniform(8.0, cur - kMinSpeedChange - 0.5));
      add_coast(b, b.target_speed);
      add_turn(b);
      items.push_back(b);
      cur = b.target_speed;
      items.push_back(cruise());
      cur += s;
    }

    // The event.
    const bool must_stop = bsna < cfg.min_bsna;
    const bool may_stop = bsna < cfg.max_bsna;
    const bool can_split = room() >= 4 && cur >= kMinSpeedChange + kMinMovingSpeed + 0.5;
    const bool can_slow = cur >= kMinSpeedChange + kMinMovingSpeed + 0.5;
    double pick = uniform(0.0, 1.0);
    ScenarioType kind = ScenarioType::kBSnA;
    if (!must_stop) {
      if (!may_stop || pick >= 0.45) {
        kind = can_split && pick >= 0.8 ? ScenarioType::kB : ScenarioType::kBnA;
      }
      if (kind != ScenarioType::kBSnA && !can_slow) {
        kind = may_stop ? ScenarioType::kBSnA : ScenarioType::kBnA;
      }
    }
    if (kind == ScenarioType::kBSnA) {
      PlanItem e = base(ScenarioType::kBSnA);
      add_coast(e, 0.0);
      add_turn(e);
      e.stop_duration_s = std::round(uniform(1.0, 30.0));
      e.target_speed = round1(uniform(std::max(cfg.min_speed, kMinSpeedChange + 1.0), top));
      items.push_back(e);
      cur = e.target_speed;
      ++bsna;
    } else if (kind == ScenarioType::kBnA) {
      PlanItem e = base(ScenarioType::kBnA);
      e.low_speed = round1(uniform(kMinMovingSpeed + 0.5, cur - kMinSpeedChange - 0.5));
      add_coast(e, e.low_speed);
      add_turn(e);
      e.dwell_s = std::round(uniform(0.0, kMaxDwell_s));
      e.target_speed = round1(uniform(std::max(e.low_speed + kMinSpeedChange + 0.5, 12.0), top));
      items.push_back(e);
      cur = e.target_speed;
    } else {
      PlanItem b = base(ScenarioType::kB);
      b.target_speed = round1(uniform(kMinMovingSpeed + 0.5, cur - kMinSpeedChange - 0.5));
      add_coast(b, b.target_speed);
      add_turn(b);
      items.push_back(b);
      cur = b.target_speed;
      items.push_back(cruise());
      PlanItem a = base(ScenarioType::kA);
      a.target_speed = round1(uniform(std::max(cur + kMinSpeedChange + 0.5, 12.0), top));
      items.push_back(a);
      cur = a.target_speed;
    }

    // Standalone A suffix.
    while (room() >= 3 && cur - s + kMinSpeedChange + 0.5 <= top && chance(0.3)) {
      items.push_back(cruise());
      cur -= s;
      PlanItem a = base(ScenarioType::kA);
      a.target_speed = round1(uniform(cur + kMinSpeedChange + 0.5, top));
      items.push_back(a);
      cur = a.target_speed;
    }
  }

  // Closing.
  if (chance(cfg.p_end_at_rest)) {
    PlanItem it = base(ScenarioType::kCrp);
    it.duration_s = std::round(uniform(5.0, 30.0));
    it.stop_duration_s = std::round(uniform(2.0, 30.0));
    items.push_back(it);
  } else {
    items.push_back(cruise());
  }
  return plan;
}

namespace
{

json item_to_json(const PlanItem & it)
{
  json j = {
    {"type", std::string(to_string(it.type))},
    {"target_speed", it.target_speed},
    {"duration_s", it.duration_s},
    {"stop_duration_s", it.stop_duration_s},
    {"low_speed", it.low_speed},
    {"dwell_s", it.dwell_s},
    {"accel", it.accel},
    {"decel", it.decel},
    {"coast_s", it.coast_s},
    {"coast_decel", it.coast_decel},
    {"yaw_peak_deg_s", it.yaw_peak_deg_s},
  };
  if (it.pv.present) {
    j["pv"] = {
      {"headway_s", it.pv.headway_s},
      {"cut_in_at_s", it.pv.cut_in_at_s},
      {"length_m", it.pv.length_m}};
  }
  return j;
}

template <class T>
void read_opt(const json & j, const char * key, T & out)
{
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const json::exception &) {
      throw Error(ErrorKind::kSchema, std::string("plan field '") + key + "' has the wrong type");
    }
  }
}

}  // namespace

std::string plan_to_json(const ScenarioPlan & plan)
{
  json items = json::array();
  for (const auto & it : plan.items) {
    items.push_back(item_to_json(it));
  }
  json j = {
    {"initial_speed", plan.initial_speed},
    {"noise_sigma", plan.noise_sigma},
    {"dt", plan.dt},
    {"vehicle_model", plan.vehicle_model},
    {"items", items}};
  return j.dump();
}

ScenarioPlan plan_from_json(std::string_view json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw Error(ErrorKind::kSchema, std::string("plan is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("items") || !j["items"].is_array()) {
    throw Error(ErrorKind::kSchema, "plan must be an object with an 'items' array");
  }
  ScenarioPlan plan;
  read_opt(j, "initial_speed", plan.initial_speed);
  read_opt(j, "noise_sigma", plan.noise_sigma);
  read_opt(j, "dt", plan.dt);
  read_opt(j, "vehicle_model", plan.vehicle_model);
  for (const auto & ji : j["items"]) {
    PlanItem it;
    std::string type;
    read_opt(ji, "type", type);
    it.type = scenario_type_from_string(type);
    read_opt(ji, "target_speed", it.target_speed);
    read_opt(ji, "duration_s", it.duration_s);
    read_opt(ji, "stop_duration_s", it.stop_duration_s);
    read_opt(ji, "low_speed", it.low_speed);
    read_opt(ji, "dwell_s", it.dwell_s);
    read_opt(ji, "accel", it.accel);
    read_opt(ji, "decel", it.decel);
    read_opt(ji, "coast_s", it.coast_s);
    read_opt(ji, "coast_decel", it.coast_decel);
    read_opt(ji, "yaw_peak_deg_s", it.yaw_peak_deg_s);
    if (ji.contains("pv")) {
      it.pv.present = true;
      read_opt(ji["pv"], "headway_s", it.pv.headway_s);
      read_opt(ji["pv"], "cut_in_at_s", it.pv.cut_in_at_s);
      read_opt(ji["pv"], "length_m", it.pv.length_m);
    }
    plan.items.push_back(it);
  }
  return plan;
}

double sequence_accuracy(std::span<const ScenarioType> truth, std::span<const ScenarioType> got)
{
  const std::size_t m = truth.size();
  const std::size_t n = got.size();
  if (m == 0 && n == 0) {
    return 1.0;
  }
  std::vector<std::size_t> row(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    row[j] = j;
  }
  for (std::size_t i = 1; i <= m; ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= n; ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (truth[i - 1] == got[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[n]) / static_cast<double>(std::max(m, n));
}

std::vector<ScenarioType> types_of(std::span<const Scenario> scenarios)
{
  std::vector<ScenarioType> out;
  out.reserve(scenarios.size());
  for (const auto & s : scenarios) {
    out.push_back(s.type);
  }
  return out;
}

}  // namespace trajseg::synth
