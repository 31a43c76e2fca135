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

#ifndef TRAJSEG__CONFIG_HPP_
#define TRAJSEG__CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace trajseg
{

struct IngestConfig
{
  double min_trip_s{60.0};
  bool resample_1hz{false};
};

/// How the "v_min != 0" guard of the influential-minimum test is applied.
enum class ZeroGuard { kLiteral, kOff };

struct EventSearchConfig
{
  double threshold_mps{5.0};
  ZeroGuard zero_guard{ZeroGuard::kOff};
  /// Centered moving-average window applied before the extreme search;
  /// values <= 1 disable smoothing.
  int smoothing_window{0};
};

/// Standalone-A emission in the acceleration arm of slice-and-dice.
/// kLiteral compares the next rise's minimum against this rise's maximum and
/// never tests the final rise; kSymmetric mirrors the braking arm
/// (a rise is standalone when it starts more than merge_gap_s after the
/// previous rise ended).
enum class AccelSplitRule { kSymmetric, kLiteral };

/// Stop test for the event scenario of an influential pair. kAnyStop labels
/// it BSnA when any sample of the event is at rest; kMinimum looks only at
/// the influential minimum.
enum class StopLabelRule { kAnyStop, kMinimum };

struct SegmentationConfig
{
  double merge_gap_s{6.0};
  double stop_speed_mps{0.1};
  AccelSplitRule accel_split{AccelSplitRule::kSymmetric};
  StopLabelRule stop_label{StopLabelRule::kAnyStop};
  /// Split a non-stop valley longer than merge_gap_s into B + A.
  bool valley_split{true};
};

struct RegimeConfig
{
  double accel_settle_mps2{0.2};
  double speed_margin_mps{2.0};
  /// Use accel <= 0 / accel > 0 when the accelerator channel is missing.
  bool pedal_proxy{false};
};

struct MetricsConfig
{
  double default_pv_length_m{5.0};
  double cutin_margin_m{10.0};
  double cutin_refractory_s{2.0};
  double curvature_min_speed_mps{1.0};
  double turn_yaw_deg_s{5.0};
  double turn_window_s{5.0};
  double ttc_closing_s{5.5};
  double ttc_urgent_s{3.0};
  double ttc_forced_s{1.0};
};

enum class WhiskerRule { kTukey, kMinMax };

struct StatsConfig
{
  double bin_width_mps{5.0};
  WhiskerRule whiskers{WhiskerRule::kTukey};
  double whisker_iqr{1.5};
  std::size_t exact_cap{1'000'000};
  std::size_t reservoir_size{100'000};
  std::uint64_t seed{20240607};
  double envelope_quantile{0.999};
  /// Points above Q3 + envelope_fence_iqr * IQR of their bin are set aside
  /// before the envelope quantile is taken. 0 disables the fence.
  double envelope_fence_iqr{1.5};
  int envelope_bins{10};
  std::size_t envelope_min_points{1000};
  std::size_t envelope_min_bin_points{100};
  int envelope_min_bins{5};
};

struct SynthConfig
{
  /// Amplitude of the shaped cruise profiles that separate events.
  double cruise_shape_mps{1.0};
  double brake_pedal_level{5.0};
  double accel_pedal_level{20.0};
  double cruise_pedal_level{8.0};
  /// Probability of flipping each pedal flag; 0 keeps pedals clean.
  double pedal_flip_prob{0.0};
};

struct Config
{
  IngestConfig ingest;
  EventSearchConfig event_search;
  SegmentationConfig segmentation;
  RegimeConfig regimes;
  MetricsConfig metrics;
  StatsConfig stats;
  SynthConfig synth;
  int workers{1};
};

std::string_view to_string(ZeroGuard guard);
ZeroGuard zero_guard_from_string(std::string_view name);
std::string_view to_string(AccelSplitRule rule);
AccelSplitRule accel_split_from_string(std::string_view name);
std::string_view to_string(StopLabelRule rule);
StopLabelRule stop_label_from_string(std::string_view name);
std::string_view to_string(WhiskerRule rule);
WhiskerRule whisker_rule_from_string(std::string_view name);

/// Overlay a JSON document onto `base`. Unknown sections or keys raise
/// Error(kSchema) so typos never silently fall back to defaults.
Config config_from_json(std::string_view json_text, const Config & base = {});
Config load_config(const std::filesystem::path & path, const Config & base = {});

/// Defaults, overlaid with $TRAJSEG_CONFIG when it is set.
Config default_config();

/// Pretty-printed, key-sorted JSON; byte-stable for a given Config.
std::string to_json(const Config & config);

}  // namespace trajseg

#endif  // TRAJSEG__CONFIG_HPP_
