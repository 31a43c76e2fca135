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

#include "trajseg/event_search.hpp"

#include "trajseg/error.hpp"

#include <algorithm>
#include <deque>

namespace trajseg::event_search
{

LocalExtremes find_local_extremes(std::span<const double> v)
{
  if (v.size() < 3) {
    throw Error(ErrorKind::kDegenerate, "extreme search needs at least 3 samples");
  }

  // Collapse runs of equal speed to their first index.
  std::vector<Index> runs;
  runs.reserve(v.size());
  for (Index k = 0; k < v.size(); ++k) {
    if (k == 0 || v[k] != v[k - 1]) {
      runs.push_back(k);
    }
  }

  LocalExtremes out;
  if (runs.size() == 1) {
    out.k_min.push_back(0);
    out.k_max.push_back(0);
    return out;
  }
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const double here = v[runs[r]];
    const bool above_left = r == 0 || here > v[runs[r - 1]];
    const bool above_right = r + 1 == runs.size() || here > v[runs[r + 1]];
    const bool below_left = r == 0 || here < v[runs[r - 1]];
    const bool below_right = r + 1 == runs.size() || here < v[runs[r + 1]];
    if (above_left && above_right) {
      out.k_max.push_back(runs[r]);
    } else if (below_left && below_right) {
      out.k_min.push_back(runs[r]);
    }
  }
  return out;
}

std::optional<Index> next_after(std::span<const Index> sorted, Index k)
{
  auto it = std::upper_bound(sorted.begin(), sorted.end(), k);
  if (it == sorted.end()) {
    return std::nullopt;
  }
  return *it;
}

InfluentialExtremes select_influential_extremes(
  std::span<const double> v, const LocalExtremes & extremes, const EventSearchConfig & config)
{
  InfluentialExtremes out;
  if (v.empty()) {
    return out;
  }
  const Index last = v.size() - 1;
  const double threshold = config.threshold_mps;
  const auto & mins = extremes.k_min;
  const auto & maxes = extremes.k_max;

  // Maxima followed by a large enough drop, minima followed by a large enough rise.
  std::vector<Index> drop_max;
  for (Index k : maxes) {
    auto next = next_after(mins, k);
    if (next && v[k] - v[*next] > threshold) {
      drop_max.push_back(k);
    }
  }
  std::vector<Index> rise_min;
  for (Index k : mins) {
    auto next = next_after(maxes, k);
    if (next && v[*next] - v[k] > threshold) {
      rise_min.push_back(k);
    }
  }

  // Sliding-window minimum over rise_min; both window edges only advance.
  std::deque<Index> window;
  std::size_t pushed = 0;

  Index prev = 0;
  for (Index k : mins) {
    auto first_drop = std::lower_bound(drop_max.begin(), drop_max.end(), prev);
    if (first_drop == drop_max.end() || *first_drop >= k) {
      continue;
    }
    auto following = std::upper_bound(drop_max.begin(), drop_max.end(), k);
    const Index horizon = following == drop_max.end() ? last : *following;

    while (pushed < rise_min.size() && rise_min[pushed] <= horizon) {
      const Index candidate = rise_min[pushed++];
      while (!window.empty() && v[window.back()] >= v[candidate]) {
        window.pop_back();
      }
      window.push_back(candidate);
    }
    while (!window.empty() && window.front() < k) {
      window.pop_front();
    }
    if (window.empty()) {
      continue;
    }
    const double lowest = v[window.front()];
    const bool guard_ok = config.zero_guard == ZeroGuard::kOff || lowest != 0.0;
    if (!(v[k] <= lowest && guard_ok)) {
      continue;
    }

    auto lo = std::lower_bound(maxes.begin(), maxes.end(), prev);
    auto hi = std::upper_bound(maxes.begin(), maxes.end(), k);
    Index best = *lo;
    for (auto it = lo; it != hi; ++it) {
      if (v[*it] > v[best]) {
        best = *it;
      }
    }
    out.k_inf_min.push_back(k);
    out.k_inf_max.push_back(best);
    prev = k;
  }
  return out;
}

std::vector<double> moving_average(std::span<const double> v, int window)
{
  std::vector<double> out(v.begin(), v.end());
  if (window <= 1 || v.empty()) {
    return out;
  }
  const auto half = static_cast<std::size_t>(window / 2);
  std::vector<double> prefix(v.size() + 1, 0.0);
  for (std::size_t k = 0; k < v.size(); ++k) {
    prefix[k + 1] = prefix[k] + v[k];
  }
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(v.size() - 1, k + half);
    out[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

ExtremeSet search(std::span<const double> v, const EventSearchConfig & config)
{
  std::vector<double> smoothed;
  std::span<const double> series = v;
  if (config.smoothing_window > 1) {
    smoothed = moving_average(v, config.smoothing_window);
    series = smoothed;
  }
  const LocalExtremes local = find_local_extremes(series);
  InfluentialExtremes influential = select_influential_extremes(series, local, config);

  ExtremeSet out;
  out.k_min = local.k_min;
  out.k_max = local.k_max;
  out.k_inf_min = std::move(influential.k_inf_min);
  out.k_inf_max = std::move(influential.k_inf_max);
  return out;
}

}  // namespace trajseg::event_search
