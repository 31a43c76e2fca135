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

#include "trajseg/config.hpp"

#include "trajseg/error.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>

#include <json.hpp>

namespace trajseg
{

using nlohmann::json;

std::string_view to_string(ZeroGuard guard)
{
  return guard == ZeroGuard::kLiteral ? "literal" : "off";
}

ZeroGuard zero_guard_from_string(std::string_view name)
{
  if (name == "literal") {
    return ZeroGuard::kLiteral;
  }
  if (name == "off") {
    return ZeroGuard::kOff;
  }
  throw Error(ErrorKind::kUsage, "zero guard must be 'literal' or 'off'");
}

std::string_view to_string(AccelSplitRule rule)
{
  return rule == AccelSplitRule::kLiteral ? "literal" : "symmetric";
}

AccelSplitRule accel_split_from_string(std::string_view name)
{
  if (name == "literal") {
    return AccelSplitRule::kLiteral;
  }
  if (name == "symmetric") {
    return AccelSplitRule::kSymmetric;
  }
  throw Error(ErrorKind::kUsage, "accel split rule must be 'literal' or 'symmetric'");
}

std::string_view to_string(StopLabelRule rule)
{
  return rule == StopLabelRule::kMinimum ? "minimum" : "any_stop";
}

StopLabelRule stop_label_from_string(std::string_view name)
{
  if (name == "any_stop") {
    return StopLabelRule::kAnyStop;
  }
  if (name == "minimum") {
    return StopLabelRule::kMinimum;
  }
  throw Error(ErrorKind::kUsage, "stop label rule must be 'any_stop' or 'minimum'");
}

std::string_view to_string(WhiskerRule rule)
{
  return rule == WhiskerRule::kMinMax ? "minmax" : "tukey";
}

WhiskerRule whisker_rule_from_string(std::string_view name)
{
  if (name == "tukey") {
    return WhiskerRule::kTukey;
  }
  if (name == "minmax") {
    return WhiskerRule::kMinMax;
  }
  throw Error(ErrorKind::kUsage, "whisker rule must be 'tukey' or 'minmax'");
}

namespace
{

// A field binding reads a JSON value into a Config and writes it back out.
struct Field
{
  std::function<void(Config &, const json &)> read;
  std::function<json(const Config &)> write;
};

using Section = std::map<std::string, Field>;

template <class T>
T expect(const json & value, const std::string & key)
{
  try {
    return value.get<T>();
  } catch (const json::exception &) {
    throw Error(ErrorKind::kSchema, "config key '" + key + "' has the wrong type");
  }
}

// Getters return a mutable reference; writing only reads through it.
template <class T, class Getter>
Field bind(Getter get, const std::string & key)
{
  return Field{
    [get, key](Config & c, const json & j) { get(c) = expect<T>(j, key); },
    [get](const Config & c) { return json(get(const_cast<Config &>(c))); }};
}

template <class Enum, class Getter>
Field bind_enum(Getter get, const std::string & key, Enum (*parse)(std::string_view))
{
  return Field{
    [get, key, parse](Config & c, const json & j) {
      try {
        get(c) = parse(expect<std::string>(j, key));
      } catch (const Error & e) {
        throw Error(ErrorKind::kSchema, "config key '" + key + "': " + e.what());
      }
    },
    [get](const Config & c) {
      return json(std::string(to_string(get(const_cast<Config &>(c)))));
    }};
}

const std::map<std::string, Section> & schema()
{
  static const std::map<std::string, Section> sections = [] {
    std::map<std::string, Section> s;
    auto field = [](auto getter, const std::string & key) {
      using T = std::remove_reference_t<decltype(getter(std::declval<Config &>()))>;
      return bind<T>(getter, key);
    };
    auto enum_field = [](auto getter, const std::string & key, auto parse) {
      return bind_enum(getter, key, parse);
    };

    s["ingest"] = {
      {"min_trip_s", field([](Config & c) -> double & { return c.ingest.min_trip_s; }, "ingest.min_trip_s")},
      {"resample_1hz", field([](Config & c) -> bool & { return c.ingest.resample_1hz; }, "ingest.resample_1hz")},
    };
    s["event_search"] = {
      {"threshold_mps", field([](Config & c) -> double & { return c.event_search.threshold_mps; }, "event_search.threshold_mps")},
      {"zero_guard", enum_field([](Config & c) -> ZeroGuard & { return c.event_search.zero_guard; }, "event_search.zero_guard", &zero_guard_from_string)},
      {"smoothing_window", field([](Config & c) -> int & { return c.event_search.smoothing_window; }, "event_search.smoothing_window")},
    };
    s["segmentation"] = {
      {"merge_gap_s", field([](Config & c) -> double & { return c.segmentation.merge_gap_s; }, "segmentation.merge_gap_s")},
      {"stop_speed_mps", field([](Config & c) -> double & { return c.segmentation.stop_speed_mps; }, "segmentation.stop_speed_mps")},
      {"accel_split", enum_field([](Config & c) -> AccelSplitRule & { return c.segmentation.accel_split; }, "segmentation.accel_split", &accel_split_from_string)},
      {"stop_label", enum_field([](Config & c) -> StopLabelRule & { return c.segmentation.stop_label; }, "segmentation.stop_label", &stop_label_from_string)},
      {"valley_split", field([](Config & c) -> bool & { return c.segmentation.valley_split; }, "segmentation.valley_split")},
    };
    s["regimes"] = {
      {"accel_settle_mps2", field([](Config & c) -> double & { return c.regimes.accel_settle_mps2; }, "regimes.accel_settle_mps2")},
      {"speed_margin_mps", field([](Config & c) -> double & { return c.regimes.speed_margin_mps; }, "regimes.speed_margin_mps")},
      {"pedal_proxy", field([](Config & c) -> bool & { return c.regimes.pedal_proxy; }, "regimes.pedal_proxy")},
    };
    s["metrics"] = {
      {"default_pv_length_m", field([](Config & c) -> double & { return c.metrics.default_pv_length_m; }, "metrics.default_pv_length_m")},
      {"cutin_margin_m", field([](Config & c) -> double & { return c.metrics.cutin_margin_m; }, "metrics.cutin_margin_m")},
      {"cutin_refractory_s", field([](Config & c) -> double & { return c.metrics.cutin_refractory_s; }, "metrics.cutin_refractory_s")},
      {"curvature_min_speed_mps", field([](Config & c) -> double & { return c.metrics.curvature_min_speed_mps; }, "metrics.curvature_min_speed_mps")},
      {"turn_yaw_deg_s", field([](Config & c) -> double & { return c.metrics.turn_yaw_deg_s; }, "metrics.turn_yaw_deg_s")},
      {"turn_window_s", field([](Config & c) -> double & { return c.metrics.turn_window_s; }, "metrics.turn_window_s")},
      {"ttc_closing_s", field([](Config & c) -> double & { return c.metrics.ttc_closing_s; }, "metrics.ttc_closing_s")},
      {"ttc_urgent_s", field([](Config & c) -> double & { return c.metrics.ttc_urgent_s; }, "metrics.ttc_urgent_s")},
      {"ttc_forced_s", field([](Config & c) -> double & { return c.metrics.ttc_forced_s; }, "metrics.ttc_forced_s")},
    };
    s["stats"] = {
      {"bin_width_mps", field([](Config & c) -> double & { return c.stats.bin_width_mps; }, "stats.bin_width_mps")},
      {"whiskers", enum_field([](Config & c) -> WhiskerRule & { return c.stats.whiskers; }, "stats.whiskers", &whisker_rule_from_string)},
      {"whisker_iqr", field([](Config & c) -> double & { return c.stats.whisker_iqr; }, "stats.whisker_iqr")},
      {"exact_cap", field([](Config & c) -> std::size_t & { return c.stats.exact_cap; }, "stats.exact_cap")},
      {"reservoir_size", field([](Config & c) -> std::size_t & { return c.stats.reservoir_size; }, "stats.reservoir_size")},
      {"seed", field([](Config & c) -> std::uint64_t & { return c.stats.seed; }, "stats.seed")},
      {"envelope_fence_iqr", field([](Config & c) -> double & { return c.stats.envelope_fence_iqr; }, "stats.envelope_fence_iqr")},
      {"envelope_quantile", field([](Config & c) -> double & { return c.stats.envelope_quantile; }, "stats.envelope_quantile")},
      {"envelope_bins", field([](Config & c) -> int & { return c.stats.envelope_bins; }, "stats.envelope_bins")},
      {"envelope_min_points", field([](Config & c) -> std::size_t & { return c.stats.envelope_min_points; }, "stats.envelope_min_points")},
      {"envelope_min_bin_points", field([](Config & c) -> std::size_t & { return c.stats.envelope_min_bin_points; }, "stats.envelope_min_bin_points")},
      {"envelope_min_bins", field([](Config & c) -> int & { return c.stats.envelope_min_bins; }, "stats.envelope_min_bins")},
    };
    s["synth"] = {
      {"cruise_shape_mps", field([](Config & c) -> double & { return c.synth.cruise_shape_mps; }, "synth.cruise_shape_mps")},
      {"brake_pedal_level", field([](Config & c) -> double & { return c.synth.brake_pedal_level; }, "synth.brake_pedal_level")},
      {"accel_pedal_level", field([](Config & c) -> double & { return c.synth.accel_pedal_level; }, "synth.accel_pedal_level")},
      {"cruise_pedal_level", field([](Config & c) -> double & { return c.synth.cruise_pedal_level; }, "synth.cruise_pedal_level")},
      {"pedal_flip_prob", field([](Config & c) -> double & { return c.synth.pedal_flip_prob; }, "synth.pedal_flip_prob")},
    };
    return s;
  }();
  return sections;
}

void check_ranges(const Config & c)
{
  auto require = [](bool ok, const char * message) {
    if (!ok) {
      throw Error(ErrorKind::kSchema, message);
    }
  };
  require(c.event_search.threshold_mps > 0.0, "event_search.threshold_mps must be > 0");
  require(c.segmentation.merge_gap_s >= 0.0, "segmentation.merge_gap_s must be >= 0");
  require(c.stats.bin_width_mps > 0.0, "stats.bin_width_mps must be > 0");
  require(
    c.stats.envelope_quantile > 0.0 && c.stats.envelope_quantile <= 1.0,
    "stats.envelope_quantile must lie in (0, 1]");
  require(c.stats.envelope_fence_iqr >= 0.0, "stats.envelope_fence_iqr must be >= 0");
  require(c.stats.envelope_bins >= 1, "stats.envelope_bins must be >= 1");
  require(c.stats.reservoir_size >= 1, "stats.reservoir_size must be >= 1");
  require(
    c.synth.pedal_flip_prob >= 0.0 && c.synth.pedal_flip_prob <= 1.0,
    "synth.pedal_flip_prob must lie in [0, 1]");
  require(c.workers >= 1, "workers must be >= 1");
}

}  // namespace

Config config_from_json(std::string_view json_text, const Config & base)
{
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw Error(ErrorKind::kSchema, std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::kSchema, "config must be a JSON object");
  }

  Config out = base;
  const auto & sections = schema();
  for (const auto & [name, body] : doc.items()) {
    if (name == "workers") {
      out.workers = expect<int>(body, "workers");
      continue;
    }
    auto section = sections.find(name);
    if (section == sections.end()) {
      throw Error(ErrorKind::kSchema, "unknown config section '" + name + "'");
    }
    if (!body.is_object()) {
      throw Error(ErrorKind::kSchema, "config section '" + name + "' must be an object");
    }
    for (const auto & [key, value] : body.items()) {
      auto field = section->second.find(key);
      if (field == section->second.end()) {
        throw Error(ErrorKind::kSchema, "unknown config key '" + name + "." + key + "'");
      }
      field->second.read(out, value);
    }
  }
  check_ranges(out);
  return out;
}

Config load_config(const std::filesystem::path & path, const Config & base)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot read config file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return config_from_json(text.str(), base);
}

Config default_config()
{
  if (const char * env = std::getenv("TRAJSEG_CONFIG"); env != nullptr && *env != '\0') {
    return load_config(env);
  }
  return Config{};
}

std::string to_json(const Config & config)
{
  json doc = json::object();
  for (const auto & [name, section] : schema()) {
    json body = json::object();
    for (const auto & [key, field] : section) {
      body[key] = field.write(config);
    }
    doc[name] = std::move(body);
  }
  doc["workers"] = config.workers;
  return doc.dump(2) + "\n";
}

}  // namespace trajseg
