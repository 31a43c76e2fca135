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

#include "trajseg/records.hpp"

#include "trajseg/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace trajseg::records
{

using nlohmann::json;

namespace
{

json parse(std::string_view text, const char * what)
{
  try {
    return json::parse(text);
  } catch (const json::parse_error & e) {
    throw Error(ErrorKind::kSchema, std::string(what) + " is not valid JSON: " + e.what());
  }
}

template <class T>
T field(const json & j, const char * key, const char * what)
{
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::kSchema, std::string(what) + " lacks field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception &) {
    throw Error(ErrorKind::kSchema, std::string(what) + " field '" + key + "' has the wrong type");
  }
}

template <class T>
std::optional<T> optional_field(const json & j, const char * key, const char * what)
{
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return field<T>(j, key, what);
}

void put(json & j, const char * key, const std::optional<double> & value)
{
  if (value) {
    j[key] = *value;
  }
}

json sample_json(const Sample & s)
{
  json j = {{"t", s.t}, {"v", s.v}};
  put(j, "brake_pedal", s.brake_pedal);
  put(j, "accel_pedal", s.accel_pedal);
  put(j, "yaw_rate", s.yaw_rate);
  put(j, "fuel_flow", s.fuel_flow);
  put(j, "gap", s.gap);
  put(j, "pv_speed", s.pv_speed);
  put(j, "pv_length", s.pv_length);
  j["ignition"] = s.ignition;
  return j;
}

Sample sample_of(const json & j)
{
  const char * what = "sample";
  Sample s;
  s.t = field<double>(j, "t", what);
  s.v = field<double>(j, "v", what);
  s.brake_pedal = optional_field<double>(j, "brake_pedal", what);
  s.accel_pedal = optional_field<double>(j, "accel_pedal", what);
  s.yaw_rate = optional_field<double>(j, "yaw_rate", what);
  s.fuel_flow = optional_field<double>(j, "fuel_flow", what);
  s.gap = optional_field<double>(j, "gap", what);
  s.pv_speed = optional_field<double>(j, "pv_speed", what);
  s.pv_length = optional_field<double>(j, "pv_length", what);
  s.ignition = optional_field<bool>(j, "ignition", what).value_or(true);
  return s;
}

json scenario_json(const Scenario & s)
{
  json j = {{"k0", s.k0}, {"kf", s.kf}, {"type", std::string(to_string(s.type))}};
  if (s.event_k) {
    j["event_k"] = *s.event_k;
  }
  if (s.params) {
    json p = {
      {"approaching_speed", s.params->approaching_speed},
      {"perceivable_distance", s.params->perceivable_distance},
      {"is_turning", s.params->is_turning}};
    put(p, "max_curvature", s.params->max_curvature);
    put(p, "turning_speed", s.params->turning_speed);
    j["params"] = p;
  }
  return j;
}

Scenario scenario_of(const json & j)
{
  const char * what = "scenario";
  Scenario s;
  s.k0 = field<Index>(j, "k0", what);
  s.kf = field<Index>(j, "kf", what);
  s.type = scenario_type_from_string(field<std::string>(j, "type", what));
  s.event_k = optional_field<Index>(j, "event_k", what);
  if (j.contains("params")) {
    const json & p = j["params"];
    ScenarioParams params;
    params.approaching_speed = field<double>(p, "approaching_speed", what);
    params.perceivable_distance = field<double>(p, "perceivable_distance", what);
    params.is_turning = field<bool>(p, "is_turning", what);
    params.max_curvature = optional_field<double>(p, "max_curvature", what);
    params.turning_speed = optional_field<double>(p, "turning_speed", what);
    s.params = params;
  }
  return s;
}

json regime_json(const Regime & r)
{
  json p = {
    {"v0", r.params.v0},
    {"vf", r.params.vf},
    {"distance_m", r.params.distance_m},
    {"duration_s", r.params.duration_s}};
  put(p, "aggressiveness", r.params.aggressiveness);
  return {{"k0", r.k0}, {"kf", r.kf}, {"type", std::string(to_string(r.type))}, {"params", p}};
}

Regime regime_of(const json & j)
{
  const char * what = "regime";
  Regime r;
  r.k0 = field<Index>(j, "k0", what);
  r.kf = field<Index>(j, "kf", what);
  r.type = regime_type_from_string(field<std::string>(j, "type", what));
  const json p = field<json>(j, "params", what);
  r.params.v0 = field<double>(p, "v0", what);
  r.params.vf = field<double>(p, "vf", what);
  r.params.distance_m = field<double>(p, "distance_m", what);
  r.params.duration_s = field<double>(p, "duration_s", what);
  r.params.aggressiveness = optional_field<double>(p, "aggressiveness", what);
  return r;
}

}  // namespace

std::string to_json(const Sample & sample) { return sample_json(sample).dump(); }

std::string to_json(const TripRecord & trip)
{
  json samples = json::array();
  for (const auto & s : trip.samples) {
    samples.push_back(sample_json(s));
  }
  json j = {
    {"vehicle_id", trip.vehicle_id},
    {"trip_id", trip.trip_id},
    {"vehicle_model", trip.vehicle_model},
    {"dt", trip.dt},
    {"samples", samples}};
  if (trip.has_derived()) {
    j["accel"] = trip.accel;
    j["dist"] = trip.dist;
  }
  return j.dump();
}

std::string to_json(const ExtremeSet & e)
{
  return json{
    {"k_min", e.k_min}, {"k_max", e.k_max}, {"k_inf_min", e.k_inf_min}, {"k_inf_max", e.k_inf_max}}
    .dump();
}

std::string to_json(const Scenario & scenario) { return scenario_json(scenario).dump(); }

std::string to_json(const Regime & regime) { return regime_json(regime).dump(); }

Sample sample_from_json(std::string_view text) { return sample_of(parse(text, "sample")); }

TripRecord trip_from_json(std::string_view text)
{
  const char * what = "trip";
  const json j = parse(text, what);
  TripRecord trip;
  trip.vehicle_id = field<std::string>(j, "vehicle_id", what);
  trip.trip_id = field<std::string>(j, "trip_id", what);
  trip.vehicle_model = optional_field<std::string>(j, "vehicle_model", what).value_or("");
  trip.dt = field<double>(j, "dt", what);
  for (const auto & s : field<json>(j, "samples", what)) {
    trip.samples.push_back(sample_of(s));
  }
  trip.accel = optional_field<std::vector<double>>(j, "accel", what).value_or(std::vector<double>{});
  trip.dist = optional_field<std::vector<double>>(j, "dist", what).value_or(std::vector<double>{});
  return trip;
}

ExtremeSet extremes_from_json(std::string_view text)
{
  const char * what = "extreme set";
  const json j = parse(text, what);
  ExtremeSet e;
  e.k_min = field<std::vector<Index>>(j, "k_min", what);
  e.k_max = field<std::vector<Index>>(j, "k_max", what);
  e.k_inf_min = field<std::vector<Index>>(j, "k_inf_min", what);
  e.k_inf_max = field<std::vector<Index>>(j, "k_inf_max", what);
  return e;
}

Scenario scenario_from_json(std::string_view text) { return scenario_of(parse(text, "scenario")); }

Regime regime_from_json(std::string_view text) { return regime_of(parse(text, "regime")); }

std::string format_double(double value)
{
  std::array<char, 64> buf{};
  const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), result.ptr);
}

std::string trip_to_csv(const TripRecord & trip, bool with_derived)
{
  if (with_derived && !trip.has_derived()) {
    throw Error(ErrorKind::kContract, "derived columns requested for a trip without them");
  }
  std::string out =
    "t,v,brake_pedal,accel_pedal,yaw_rate,fuel_flow,gap,pv_speed,pv_length,ignition";
  out += with_derived ? ",accel,dist\n" : "\n";
  auto cell = [&](const std::optional<double> & x) {
    out += ',';
    if (x) {
      out += format_double(*x);
    }
  };
  for (std::size_t k = 0; k < trip.samples.size(); ++k) {
    const Sample & s = trip.samples[k];
    out += format_double(s.t);
    out += ',';
    out += format_double(s.v);
    cell(s.brake_pedal);
    cell(s.accel_pedal);
    cell(s.yaw_rate);
    cell(s.fuel_flow);
    cell(s.gap);
    cell(s.pv_speed);
    cell(s.pv_length);
    out += s.ignition ? ",1" : ",0";
    if (with_derived) {
      cell(trip.accel[k]);
      cell(trip.dist[k]);
    }
    out += '\n';
  }
  return out;
}

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot read " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path & path, std::string_view contents)
{
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorKind::kIo, "cannot write " + path.string());
  }
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) {
    throw Error(ErrorKind::kIo, "write failed for " + path.string());
  }
}

std::vector<std::string> read_lines(const std::filesystem::path & path)
{
  const std::string text = read_file(path);
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) {
      end = text.size();
    }
    std::string line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.find_first_not_of(" \t") != std::string::npos) {
      lines.push_back(std::move(line));
    }
    pos = end + 1;
  }
  return lines;
}

}  // namespace trajseg::records
