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

#ifndef TRAJSEG__EVENT_SEARCH_HPP_
#define TRAJSEG__EVENT_SEARCH_HPP_

#include "trajseg/config.hpp"
#include "trajseg/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace trajseg::event_search
{

struct LocalExtremes
{
  std::vector<Index> k_min;
  std::vector<Index> k_max;
};

/// Local minima and maxima of a speed series. A run of equal speeds is one
/// extreme located at its first index; both endpoints are eligible. A
/// constant series yields {0} for both lists.
LocalExtremes find_local_extremes(std::span<const double> v);

struct InfluentialExtremes
{
  std::vector<Index> k_inf_min;
  std::vector<Index> k_inf_max;
};

/// Select the influential (max, min) pairs that delimit road braking events.
/// Runs in O(n) over the extremes.
InfluentialExtremes select_influential_extremes(
  std::span<const double> v, const LocalExtremes & extremes, const EventSearchConfig & config);

/// find_local_extremes + select_influential_extremes.
ExtremeSet search(std::span<const double> v, const EventSearchConfig & config);

/// First element of `sorted` strictly greater than k.
std::optional<Index> next_after(std::span<const Index> sorted, Index k);

/// Centered moving average; the window shrinks at the series ends.
std::vector<double> moving_average(std::span<const double> v, int window);

}  // namespace trajseg::event_search

#endif  // TRAJSEG__EVENT_SEARCH_HPP_
