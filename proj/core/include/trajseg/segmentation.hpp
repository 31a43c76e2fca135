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

#ifndef TRAJSEG__SEGMENTATION_HPP_
#define TRAJSEG__SEGMENTATION_HPP_

#include "trajseg/config.hpp"
#include "trajseg/types.hpp"

#include <span>
#include <vector>

namespace trajseg::segmentation
{

struct SliceConfig
{
  double threshold_mps{5.0};
  double merge_gap_s{6.0};
  AccelSplitRule accel_split{AccelSplitRule::kSymmetric};
  StopLabelRule stop_label{StopLabelRule::kAnyStop};
  bool valley_split{true};
};

SliceConfig slice_config(const Config & config);

/// Event scenarios (B, BnA, BSnA, A) cut around each influential pair,
/// sorted by k0. They do not cover the trip; see fill_gaps.
std::vector<Scenario> slice_and_dice(
  std::span<const double> v, std::span<const double> t, const ExtremeSet & extremes,
  const SliceConfig & config);

/// Label every uncovered stretch as Crp (contains v <= stop_speed) or Crs and
/// return the total cover of [0, v.size() - 1]. Throws Error(kContract) on
/// overlapping or unsorted input.
std::vector<Scenario> fill_gaps(
  std::span<const double> v, std::span<const Scenario> events, double stop_speed_mps);

struct SegmentResult
{
  ExtremeSet extremes;
  std::vector<Scenario> scenarios;
};

/// Event search, slice-and-dice and gap filling for one trip.
SegmentResult segment_trip(const TripRecord & trip, const Config & config);

}  // namespace trajseg::segmentation

#endif  // TRAJSEG__SEGMENTATION_HPP_
