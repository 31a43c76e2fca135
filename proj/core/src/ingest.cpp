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

#include "trajseg/ingest.hpp"

#include "trajseg/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

namespace trajseg::ingest
{

using nlohmann::json;

namespace
{

struct UnitName
{
  Unit unit;
  std::string_view name;
  double factor;
};

constexpr double kLitersPerGallon = 3.785411784;

constexpr UnitName kUnits[] = {
  {Unit::kSecond, "s", 1.0},
  {Unit::kMillisecond, "ms", 1e-3},
  {Unit::kMetersPerSecond, "m/s", 1.0},
  {Unit::kKilometersPerHour, "km/h", 1.0 / 3.6},
  {Unit::kMilesPerHour, "mph", 0.44704},
  {Unit::kDegreesPerSecond, "deg/s", 1.0},
  {Unit::kRadiansPerSecond, "rad/s", 180.0 / std::numbers::pi},
  {Unit::kMeter, "m", 1.0},
  {Unit::kLitersPerHour, "l/h", 1.0},
  {Unit::kMillilitersPerSecond, "ml/s", 3.6},
  {Unit::kGallonsPerHour, "gal/h", kLitersPerGallon},
  {Unit::kRaw, "raw", 1.0},
};

enum class Dimension { kTime, kSpeed, kYaw, kLength, kFuel, kRaw };

struct FieldInfo
{
  std::string_view name;
  Dimension dimension;
};

constexpr FieldInfo kFields[] = {
  {"t", Dimension::kTime},           {"v", Dimension::kSpeed},
  {"brake_pedal", Dimension::kRaw},  {"accel_pedal", Dimension::kRaw},
  {"yaw_rate", Dimension::kYaw},     {"fuel_flow", Dimension::kFuel},
  {"gap", Dimension::kLength},       {"pv_speed", Dimension::kSpeed},
  {"pv_length", Dimension::kLength}, {"ignition", Dimension::kRaw},
};

Dimension dimension_of(Unit unit)
{
  switch (unit) {
    case Unit::kSecond:
    case Unit::kMillisecond:
      return Dimension::kTime;
    case Unit::kMetersPerSecond:
    case Unit::kKilometersPerHour:
    case Unit::kMilesPerHour:
      return Dimension::kSpeed;
    case Unit::kDegreesPerSecond:
    case Unit::kRadiansPerSecond:
      return Dimension::kYaw;
    case Unit::kMeter:
      return Dimension::kLength;
    case Unit::kLitersPerHour:
    case Unit::kMillilitersPerSecond:
    case Unit::kGallonsPerHour:
      return Dimension::kFuel;
    case Unit::kRaw:
      return Dimension::kRaw;
  }
  return Dimension::kRaw;
}

Unit canonical_unit(Dimension dimension)
{
  switch (dimension) {
    case Dimension::kTime:
      return Unit::kSecond;
    case Dimension::kSpeed:
      return Unit::kMetersPerSecond;
    case Dimension::kYaw:
      return Unit::kDegreesPerSecond;
    case Dimension::kLength:
      return Unit::kMeter;
    case Dimension::kFuel:
      return Unit::kLitersPerHour;
    case Dimension::kRaw:
      return Unit::kRaw;
  }
  return Unit::kRaw;
}

const FieldInfo * field_info(std::string_view field)
{
  for (const auto & info : kFields) {
    if (info.name == field) {
      return &info;
    }
  }
  return nullptr;
}

std::string_view trim(std::string_view s)
{
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Split one CSV line. Double-quoted cells may contain commas and "" escapes.
void split_csv(std::string_view line, std::vector<std::string> & cells)
{
  cells.clear();
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cell.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(std::move(cell));
  for (auto & c : cells) {
    c = std::string(trim(c));
  }
}

std::optional<double> parse_number(std::string_view text)
{
  text = trim(text);
  if (text.empty()) {
    return std::nullopt;
  }
  if (text.front() == '+') {
    text.remove_prefix(1);
  }
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<bool> parse_flag(std::string_view text)
{
  text = trim(text);
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "true" || lower == "on" || lower == "yes") {
    return true;
  }
  if (lower == "false" || lower == "off" || lower == "no") {
    return false;
  }
  if (auto number = parse_number(text)) {
    return *number > 0.0;
  }
  return std::nullopt;
}

double lerp(double a, double b, double w)
{
  return a + w * (b - a);
}

std::optional<double> lerp_opt(
  const std::optional<double> & a, const std::optional<double> & b, double w)
{
  if (a && b) {
    return lerp(*a, *b, w);
  }
  return a;
}

}  // namespace

Unit unit_from_string(std::string_view name)
{
  for (const auto & u : kUnits) {
    if (u.name == name) {
      return u.unit;
    }
  }
  throw Error(ErrorKind::kSchema, "unknown unit '" + std::string(name) + "'");
}

std::string_view to_string(Unit unit)
{
  for (const auto & u : kUnits) {
    if (u.unit == unit) {
      return u.name;
    }
  }
  return "raw";
}

double to_canonical_factor(Unit unit)
{
  for (const auto & u : kUnits) {
    if (u.unit == unit) {
      return u.factor;
    }
  }
  return 1.0;
}

void ColumnMap::set(const std::string & field, ColumnSpec spec)
{
  fields_[field] = std::move(spec);
}

const ColumnSpec * ColumnMap::find(std::string_view field) const
{
  auto it = fields_.find(field);
  return it == fields_.end() ? nullptr : &it->second;
}

void ColumnMap::validate() const
{
  for (const char * mandatory : {"t", "v"}) {
    if (find(mandatory) == nullptr) {
      throw Error(
        ErrorKind::kSchema, std::string("column map lacks mandatory field '") + mandatory + "'");
    }
  }
  for (const auto & [field, spec] : fields_) {
    const FieldInfo * info = field_info(field);
    if (info == nullptr) {
      throw Error(ErrorKind::kSchema, "unknown canonical field '" + field + "'");
    }
    if (spec.column.empty()) {
      throw Error(ErrorKind::kSchema, "field '" + field + "' maps to an empty column name");
    }
    if (dimension_of(spec.unit) != info->dimension) {
      throw Error(
        ErrorKind::kSchema, "unit '" + std::string(to_string(spec.unit)) +
                              "' does not fit field '" + field + "'");
    }
  }
}

ColumnMap ColumnMap::canonical()
{
  ColumnMap map;
  for (const auto & info : kFields) {
    map.set(std::string(info.name), {std::string(info.name), canonical_unit(info.dimension)});
  }
  return map;
}

ColumnMap ColumnMap::from_json(std::string_view json_text)
{
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error & e) {
    throw Error(ErrorKind::kSchema, std::string("schema is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::kSchema, "schema must be a JSON object");
  }
  ColumnMap map;
  for (const auto & [field, body] : doc.items()) {
    ColumnSpec spec;
    const FieldInfo * info = field_info(field);
    if (info == nullptr) {
      throw Error(ErrorKind::kSchema, "unknown canonical field '" + field + "'");
    }
    spec.unit = canonical_unit(info->dimension);
    if (body.is_string()) {
      spec.column = body.get<std::string>();
    } else if (body.is_object() && body.contains("column") && body["column"].is_string()) {
      spec.column = body["column"].get<std::string>();
      if (body.contains("unit")) {
        if (!body["unit"].is_string()) {
          throw Error(ErrorKind::kSchema, "unit of field '" + field + "' must be a string");
        }
        spec.unit = unit_from_string(body["unit"].get<std::string>());
      }
    } else {
      throw Error(
        ErrorKind::kSchema, "field '" + field + "' must map to a column name or {column, unit}");
    }
    map.set(field, std::move(spec));
  }
  map.validate();
  return map;
}

ColumnMap ColumnMap::load(const std::filesystem::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot read schema file " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return from_json(text.str());
}

std::string ColumnMap::to_json() const
{
  json doc = json::object();
  for (const auto & [field, spec] : fields_) {
    doc[field] = {{"column", spec.column}, {"unit", std::string(ingest::to_string(spec.unit))}};
  }
  return doc.dump(2) + "\n";
}

ParseResult parse_telemetry(std::string_view bytes, const ColumnMap & column_map)
{
  column_map.validate();
  ParseResult result;

  std::vector<std::string> cells;
  std::size_t pos = 0;
  auto next_line = [&](std::string_view & line) {
    while (pos < bytes.size()) {
      std::size_t end = bytes.find('\n', pos);
      if (end == std::string_view::npos) {
        end = bytes.size();
      }
      line = bytes.substr(pos, end - pos);
      pos = end + 1;
      if (!trim(line).empty()) {
        return true;
      }
    }
    return false;
  };

  std::string_view line;
  if (!next_line(line)) {
    throw Error(ErrorKind::kSchema, "telemetry table has no header row");
  }
  if (line.size() >= 3 && line.substr(0, 3) == "\xEF\xBB\xBF") {
    line.remove_prefix(3);
  }
  split_csv(line, cells);

  struct Binding
  {
    std::string_view field;
    std::size_t column;
    double factor;
  };
  std::vector<Binding> bindings;
  for (const auto & [field, spec] : column_map.fields()) {
    auto it = std::find(cells.begin(), cells.end(), spec.column);
    if (it == cells.end()) {
      if (field == "t" || field == "v") {
        throw Error(
          ErrorKind::kSchema, "mandatory column '" + spec.column + "' (" + field +
                                ") is missing from the header");
      }
      continue;
    }
    bindings.push_back(
      {field, static_cast<std::size_t>(it - cells.begin()), to_canonical_factor(spec.unit)});
  }

  std::size_t row = 0;
  std::optional<double> previous_t;
  while (next_line(line)) {
    ++row;
    split_csv(line, cells);
    Sample sample;
    bool have_t = false;
    bool have_v = false;
    std::string problem;
    for (const auto & b : bindings) {
      const std::string_view cell = b.column < cells.size() ? std::string_view(cells[b.column])
                                                            : std::string_view();
      if (b.field == "ignition") {
        if (cell.empty()) {
          continue;
        }
        if (auto flag = parse_flag(cell)) {
          sample.ignition = *flag;
        } else {
          problem = "ignition value '" + std::string(cell) + "' is not a flag";
        }
        continue;
      }
      auto value = parse_number(cell);
      if (!value) {
        if (!cell.empty()) {
          problem = std::string(b.field) + " value '" + std::string(cell) + "' is not a number";
        }
        if (b.field == "t" || b.field == "v") {
          problem = "mandatory field " + std::string(b.field) + " is missing or not a number";
          break;
        }
        continue;
      }
      const double x = *value * b.factor;
      if (b.field == "t") {
        sample.t = x;
        have_t = true;
      } else if (b.field == "v") {
        sample.v = x;
        have_v = true;
      } else if (b.field == "brake_pedal") {
        sample.brake_pedal = x;
      } else if (b.field == "accel_pedal") {
        sample.accel_pedal = x;
      } else if (b.field == "yaw_rate") {
        sample.yaw_rate = x;
      } else if (b.field == "fuel_flow") {
        sample.fuel_flow = x;
      } else if (b.field == "gap") {
        sample.gap = x;
      } else if (b.field == "pv_speed") {
        sample.pv_speed = x;
      } else if (b.field == "pv_length") {
        sample.pv_length = x;
      }
    }
    if (!have_t || !have_v) {
      result.diagnostics.push_back(
        {row, problem.empty() ? "mandatory field is missing" : problem});
      continue;
    }
    if (sample.v < 0.0) {
      result.diagnostics.push_back({row, "negative speed"});
      continue;
    }
    if (sample.fuel_flow && *sample.fuel_flow < 0.0) {
      result.diagnostics.push_back({row, "negative fuel flow dropped"});
      sample.fuel_flow.reset();
    }
    if (sample.gap.has_value() != sample.pv_speed.has_value() || (sample.gap && *sample.gap <= 0.0)) {
      result.diagnostics.push_back({row, "incomplete or non-positive PV signals dropped"});
      sample.gap.reset();
      sample.pv_speed.reset();
    }
    if (!problem.empty()) {
      result.diagnostics.push_back({row, problem});
    }
    if (previous_t && !(sample.t > *previous_t)) {
      throw Error(
        ErrorKind::kData, "timestamps are not strictly increasing at row " + std::to_string(row),
        row);
    }
    previous_t = sample.t;
    result.samples.push_back(sample);
  }
  return result;
}

double nominal_period(std::span<const Sample> samples)
{
  if (samples.size() < 2) {
    return 1.0;
  }
  std::vector<double> steps;
  steps.reserve(samples.size() - 1);
  for (std::size_t k = 1; k < samples.size(); ++k) {
    steps.push_back(samples[k].t - samples[k - 1].t);
  }
  auto mid = steps.begin() + static_cast<std::ptrdiff_t>(steps.size() / 2);
  std::nth_element(steps.begin(), mid, steps.end());
  return *mid;
}

SplitResult split_trips(std::span<const Sample> samples, const SplitOptions & options)
{
  SplitResult result;
  std::size_t k = 0;
  while (k < samples.size()) {
    if (!samples[k].ignition) {
      ++k;
      continue;
    }
    std::size_t end = k;
    while (end < samples.size() && samples[end].ignition) {
      ++end;
    }
    const double duration = samples[end - 1].t - samples[k].t;
    if (end - k < 2 || duration < options.min_duration_s) {
      ++result.dropped;
    } else {
      TripRecord trip;
      trip.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(k),
                          samples.begin() + static_cast<std::ptrdiff_t>(end));
      trip.dt = nominal_period(trip.samples);
      result.trips.push_back(std::move(trip));
    }
    k = end;
  }
  return result;
}

std::vector<Sample> resample(std::span<const Sample> samples, double period)
{
  if (!(period > 0.0)) {
    throw Error(ErrorKind::kUsage, "resampling period must be > 0");
  }
  std::vector<Sample> out;
  if (samples.empty()) {
    return out;
  }
  const double t0 = samples.front().t;
  const double t_end = samples.back().t;
  const double slack = period * 1e-9;
  std::size_t seg = 0;
  for (std::size_t i = 0;; ++i) {
    const double t = t0 + static_cast<double>(i) * period;
    if (t > t_end + slack) {
      break;
    }
    while (seg + 1 < samples.size() && samples[seg + 1].t <= t) {
      ++seg;
    }
    const Sample & a = samples[seg];
    if (a.t == t || seg + 1 >= samples.size()) {
      Sample s = a;
      s.t = t;
      out.push_back(s);
      continue;
    }
    const Sample & b = samples[seg + 1];
    const double w = (t - a.t) / (b.t - a.t);
    Sample s = a;
    s.t = t;
    s.v = lerp(a.v, b.v, w);
    s.yaw_rate = lerp_opt(a.yaw_rate, b.yaw_rate, w);
    s.fuel_flow = lerp_opt(a.fuel_flow, b.fuel_flow, w);
    if (a.has_pv() && b.has_pv()) {
      s.gap = lerp(*a.gap, *b.gap, w);
      s.pv_speed = lerp(*a.pv_speed, *b.pv_speed, w);
    } else {
      s.gap.reset();
      s.pv_speed.reset();
    }
    s.pv_length = lerp_opt(a.pv_length, b.pv_length, w);
    out.push_back(s);
  }
  return out;
}

TripRecord derive_signals(TripRecord trip, const DeriveOptions & options)
{
  if (trip.samples.size() < 2) {
    throw Error(ErrorKind::kDegenerate, "a trip needs at least 2 samples");
  }
  if (options.resample_1hz) {
    trip.samples = resample(trip.samples, 1.0);
    if (trip.samples.size() < 2) {
      throw Error(ErrorKind::kDegenerate, "a trip needs at least 2 samples after resampling");
    }
  }
  trip.dt = nominal_period(trip.samples);

  const std::size_t n = trip.samples.size();
  trip.accel.assign(n, 0.0);
  trip.dist.assign(n, 0.0);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double step = trip.samples[k + 1].t - trip.samples[k].t;
    trip.accel[k] = (trip.samples[k + 1].v - trip.samples[k].v) / step;
    trip.dist[k + 1] = trip.dist[k] + trip.samples[k].v * step;
  }
  trip.accel[n - 1] = trip.accel[n - 2];
  return trip;
}

}  // namespace trajseg::ingest
