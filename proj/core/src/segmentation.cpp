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

#include "trajseg/segmentation.hpp"

#include "trajseg/error.hpp"
#include "trajseg/event_search.hpp"

#include <algorithm>
#include <string>
#include <tuple>

namespace trajseg::segmentation
{

using event_search::next_after;

SliceConfig slice_config(const Config & config)
{
  SliceConfig out;
  out.threshold_mps = config.event_search.threshold_mps;
  out.merge_gap_s = config.segmentation.merge_gap_s;
  out.accel_split = config.segmentation.accel_split;
  out.stop_label = config.segmentation.stop_label;
  out.valley_split = config.segmentation.valley_split;
  return out;
}

namespace
{

Scenario make(Index k0, Index kf, ScenarioType type, std::optional<Index> event_k = std::nullopt)
{
  Scenario s;
  s.k0 = k0;
  s.kf = kf;
  s.type = type;
  s.event_k = event_k;
  return s;
}

// Elements of `sorted` within [lo, hi].
std::vector<Index> within(std::span<const Index> sorted, Index lo, Index hi)
{
  auto first = std::lower_bound(sorted.begin(), sorted.end(), lo);
  auto last = std::upper_bound(sorted.begin(), sorted.end(), hi);
  return {first, last};
}

}  // namespace

std::vector<Scenario> slice_and_dice(
  std::span<const double> v, std::span<const double> t, const ExtremeSet & extremes,
  const SliceConfig & config)
{
  std::vector<Scenario> out;
  if (v.empty() || extremes.k_inf_min.empty()) {
    return out;
  }
  if (t.size() != v.size()) {
    throw Error(ErrorKind::kContract, "speed and time series differ in length");
  }
  const Index last = v.size() - 1;
  const double threshold = config.threshold_mps;
  const double gap = config.merge_gap_s;
  const auto & mins = extremes.k_min;
  const auto & maxes = extremes.k_max;

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

  for (std::size_t i = 0; i < extremes.k_inf_min.size(); ++i) {
    const Index peak = extremes.k_inf_max[i];
    const Index bottom = extremes.k_inf_min[i];

    // Braking arm: drops separated from the next drop become standalone B.
    const std::vector<Index> brk = within(drop_max, peak, bottom);
    std::optional<Index> last_b_end;
    for (std::size_t j = 0; j + 1 < brk.size(); ++j) {
      const Index drop_end = *next_after(mins, brk[j]);
      if (t[brk[j + 1]] - t[drop_end] > gap) {
        out.push_back(make(brk[j], drop_end, ScenarioType::kB, drop_end));
        last_b_end = drop_end;
      }
    }
    Index k0 = peak;
    if (last_b_end) {
      k0 = *next_after(brk, *last_b_end);
    } else if (!brk.empty()) {
      k0 = brk.front();
    }
    // Acceleration arm.
    const Index upper = i + 1 < extremes.k_inf_max.size() ? extremes.k_inf_max[i + 1] : last;
    const std::vector<Index> acc = within(rise_min, bottom, upper);
    std::vector<Index> rise_end(acc.size());
    for (std::size_t j = 0; j < acc.size(); ++j) {
      rise_end[j] = *next_after(maxes, acc[j]);
    }
    auto fallback_end = [&]() {
      if (!acc.empty()) {
        return rise_end.back();
      }
      return next_after(maxes, bottom).value_or(last);
    };

    std::vector<Scenario> standalone_a;
    std::optional<Index> event_kf;
    if (config.accel_split == AccelSplitRule::kLiteral) {
      // Compares the start of the next rise with the end of this one; the
      // final rise is never tested, and a separated rise other than the
      // first closes the arm without emitting the event itself.
      bool closed = false;
      for (std::size_t j = 0; j + 1 < acc.size(); ++j) {
        if (t[acc[j + 1]] - t[rise_end[j]] > gap) {
          closed = true;
          if (j != 0) {
            standalone_a.push_back(make(acc[j], rise_end[j], ScenarioType::kA));
          } else {
            event_kf = rise_end[j];
          }
        }
      }
      if (!closed) {
        event_kf = fallback_end();
      }
    } else {
      // A rise starting more than `gap` after the previous one ended opens a
      // standalone A; rises that follow it closely extend it.
      std::size_t group_start = 0;
      for (std::size_t j = 1; j <= acc.size(); ++j) {
        const bool split = j == acc.size() || t[acc[j]] - t[rise_end[j - 1]] > gap;
        if (!split) {
          continue;
        }
        if (group_start == 0) {
          event_kf = rise_end[j - 1];
        } else {
          standalone_a.push_back(make(acc[group_start], rise_end[j - 1], ScenarioType::kA));
        }
        group_start = j;
      }
      if (acc.empty()) {
        event_kf = fallback_end();
      }
    }

    if (event_kf) {
      bool stops = v[bottom] == 0.0;
      if (config.stop_label == StopLabelRule::kAnyStop) {
        for (Index k = k0; k <= *event_kf && !stops; ++k) {
          stops = v[k] == 0.0;
        }
      }
      const ScenarioType label = stops ? ScenarioType::kBSnA : ScenarioType::kBnA;
      bool split_valley = false;
      if (config.valley_split && label == ScenarioType::kBnA && !acc.empty()) {
        const Index valley_in = brk.empty() ? bottom : *next_after(mins, brk.back());
        // A flat valley floor is one minimum; the rise leaves from its far end.
        Index valley_out = acc.front();
        while (valley_out < last && v[valley_out + 1] == v[valley_out]) {
          ++valley_out;
        }
        split_valley = valley_out > valley_in && t[valley_out] - t[valley_in] > gap &&
                       v[k0] - v[valley_in] > threshold &&
                       v[*event_kf] - v[valley_out] > threshold && k0 < valley_in &&
                       valley_out < *event_kf;
        if (split_valley) {
          out.push_back(make(k0, valley_in, ScenarioType::kB, valley_in));
          out.push_back(make(valley_out, *event_kf, ScenarioType::kA));
        }
      }
      if (!split_valley) {
        out.push_back(make(k0, *event_kf, label, bottom));
      }
    }
    out.insert(out.end(), standalone_a.begin(), standalone_a.end());
  }

  std::stable_sort(out.begin(), out.end(), [](const Scenario & a, const Scenario & b) {
    return std::tie(a.k0, a.kf) < std::tie(b.k0, b.kf);
  });
  return out;
}

std::vector<Scenario> fill_gaps(
  std::span<const double> v, std::span<const Scenario> events, double stop_speed_mps)
{
  if (v.size() < 2) {
    throw Error(ErrorKind::kDegenerate, "gap filling needs at least 2 samples");
  }
  const Index last = v.size() - 1;
  auto label = [&](Index a, Index b) {
    for (Index k = a; k <= b; ++k) {
      if (v[k] <= stop_speed_mps) {
        return ScenarioType::kCrp;
      }
    }
    return ScenarioType::kCrs;
  };

  std::vector<Scenario> out;
  out.reserve(2 * events.size() + 1);
  Index cursor = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const Scenario & e = events[i];
    if (!(e.k0 < e.kf) || e.kf > last) {
      throw Error(
        ErrorKind::kContract, "event scenario " + std::to_string(i) + " is malformed");
    }
    if (e.k0 < cursor) {
      throw Error(
        ErrorKind::kContract, "event scenario " + std::to_string(i) + " overlaps its predecessor");
    }
    if (e.k0 > cursor) {
      out.push_back(make(cursor, e.k0, label(cursor, e.k0)));
    }
    out.push_back(e);
    cursor = e.kf;
  }
  if (cursor < last) {
    out.push_back(make(cursor, last, label(cursor, last)));
  }
  return out;
}

SegmentResult segment_trip(const TripRecord & trip, const Config & config)
{
  const std::vector<double> v = trip.speeds();
  const std::vector<double> t = trip.times();
  SegmentResult out;
  out.extremes = event_search::search(v, config.event_search);
  const auto events = slice_and_dice(v, t, out.extremes, slice_config(config));
  out.scenarios = fill_gaps(v, events, config.segmentation.stop_speed_mps);
  validate_cover(out.scenarios, trip.last());
  return out;
}

}  // namespace trajseg::segmentation
