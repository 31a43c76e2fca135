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

#ifndef TRAJSEG__REGIMES_HPP_
#define TRAJSEG__REGIMES_HPP_

#include "trajseg/config.hpp"
#include "trajseg/types.hpp"

#include <vector>

namespace trajseg::regimes
{

/// Split a B, BnA, BSnA or A scenario into coasting, braking and
/// acceleration regimes, in that order, omitting empty ones.
///
/// Throws Error(kNotApplicable) for Crs/Crp and Error(kMissingSignal) when
/// the pedal channels needed by the rules are absent (and the accelerator
/// proxy is disabled). The trip must carry derived signals.
std::vector<Regime> isolate_regimes(
  const Scenario & scenario, const TripRecord & trip, const RegimeConfig & config);

/// v0, vf, distance, duration and aggressiveness of [k0, kf].
RegimeParams regime_params(const TripRecord & trip, Index k0, Index kf);

}  // namespace trajseg::regimes

#endif  // TRAJSEG__REGIMES_HPP_
