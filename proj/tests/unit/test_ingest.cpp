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

#include "trajseg/error.hpp"
#include "trajseg/ingest.hpp"

#include "helpers.hpp"

#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <string>

namespace trajseg::ingest
{
namespace
{

ColumnMap speed_map(const char * unit)
{
  return ColumnMap::from_json(
    std::string(R"({"t":"t","v":{"column":"spd","unit":")") + unit + R"("},"brake_pedal":"brk"})");
}

TEST(ParseTelemetry, ConvertsSpeedUnits)
{
  const auto r = parse_telemetry("t,spd\n0.0,36.0\n", speed_map("km/h"));
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_EQ(r.samples[0].t, 0.0);
  EXPECT_DOUBLE_EQ(r.samples[0].v, 10.0);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_DOUBLE_EQ(
    parse_telemetry("t,spd\n0,10\n", speed_map("mph")).samples[0].v, 4.4704);
}

TEST(ParseTelemetry, RepeatedTimestampNamesTheRow)
{
  try {
    parse_telemetry("t,spd\n1.0,3\n1.0,4\n", speed_map("m/s"));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_EQ(e.row(), 2u);
  }
}

TEST(ParseTelemetry, BinaryBrakeLevels)
{
  const auto r = parse_telemetry("t,spd,brk\n0,5,0\n1,5,5\n2,5,0\n", speed_map("m/s"));
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_FALSE(r.samples[0].brake_pressed());
  EXPECT_TRUE(r.samples[1].brake_pressed());
  EXPECT_FALSE(r.samples[2].brake_pressed());
  EXPECT_EQ(*r.samples[1].brake_pedal, 5.0);
}

TEST(ParseTelemetry, MissingMandatoryColumnIsSchemaError)
{
  try {
    parse_telemetry("time,spd\n0,1\n", speed_map("m/s"));
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
  EXPECT_THROW(parse_telemetry("", speed_map("m/s")), Error);
}

TEST(ParseTelemetry, OptionalColumnsMayBeAbsent)
{
  const auto r = parse_telemetry("t,spd\n0,1\n1,2\n", speed_map("m/s"));
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_FALSE(r.samples[0].brake_pedal.has_value());
}

TEST(ParseTelemetry, BadRowsAreRejectedWithDiagnostics)
{
  const auto r = parse_telemetry(
    "t,spd,brk\n0,1,0\n1,x,0\n2,-3,0\n3,4,junk\n\n4,5,0\n", speed_map("m/s"));
  ASSERT_EQ(r.samples.size(), 3u);
  ASSERT_EQ(r.diagnostics.size(), 3u);
  EXPECT_EQ(r.diagnostics[0].row, 2u);
  EXPECT_EQ(r.diagnostics[1].row, 3u);
  EXPECT_EQ(r.diagnostics[2].row, 4u);
  EXPECT_FALSE(r.samples[1].brake_pedal.has_value());
}

TEST(ParseTelemetry, UnpairedPvSignalsAreDropped)
{
  const auto map = ColumnMap::from_json(R"({"t":"t","v":"v","gap":"g","pv_speed":"p"})");
  const auto r = parse_telemetry("t,v,g,p\n0,10,30,8\n1,10,30,\n2,10,,\n", map);
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_TRUE(r.samples[0].has_pv());
  EXPECT_FALSE(r.samples[1].gap.has_value());
  EXPECT_FALSE(r.samples[2].has_pv());
  EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParseTelemetry, QuotedCellsAndFlags)
{
  const auto map = ColumnMap::from_json(R"({"t":"t","v":"speed, m/s","ignition":"ign"})");
  const auto r = parse_telemetry("t,\"speed, m/s\",ign\r\n0,\"3\",on\r\n1,4,0\r\n", map);
  ASSERT_EQ(r.samples.size(), 2u);
  EXPECT_EQ(r.samples[0].v, 3.0);
  EXPECT_TRUE(r.samples[0].ignition);
  EXPECT_FALSE(r.samples[1].ignition);
}

TEST(ColumnMap, Validation)
{
  EXPECT_THROW(ColumnMap::from_json(R"({"v":"v"})").validate(), Error);
  EXPECT_THROW(ColumnMap::from_json(R"({"t":"t","v":"v","warp":"w"})"), Error);
  EXPECT_THROW(ColumnMap::from_json(R"({"t":"t","v":{"column":"v","unit":"furlongs"}})"), Error);
  const auto map = ColumnMap::from_json(R"({"t":"t","v":{"column":"v","unit":"km/h"}})");
  EXPECT_EQ(ColumnMap::from_json(map.to_json()).to_json(), map.to_json());
  EXPECT_NO_THROW(ColumnMap::canonical().validate());
}

TEST(Units, Factors)
{
  EXPECT_DOUBLE_EQ(to_canonical_factor(Unit::kKilometersPerHour) * 36.0, 10.0);
  EXPECT_DOUBLE_EQ(to_canonical_factor(Unit::kMillisecond), 1e-3);
  EXPECT_NEAR(to_canonical_factor(Unit::kRadiansPerSecond), 57.29577951308232, 1e-12);
  for (auto unit : {Unit::kSecond, Unit::kMetersPerSecond, Unit::kMilesPerHour, Unit::kRaw}) {
    EXPECT_EQ(unit_from_string(to_string(unit)), unit);
  }
}

std::vector<Sample> ignition_pattern(const std::vector<std::pair<bool, int>> & runs)
{
  std::vector<Sample> out;
  for (const auto & [on, count] : runs) {
    for (int i = 0; i < count; ++i) {
      Sample s;
      s.t = static_cast<double>(out.size());
      s.v = 5.0;
      s.ignition = on;
      out.push_back(s);
    }
  }
  return out;
}

TEST(SplitTrips, IgnitionRuns)
{
  const auto samples = ignition_pattern({{false, 1}, {true, 300}, {false, 1}, {true, 500}});
  const auto r = split_trips(samples);
  ASSERT_EQ(r.trips.size(), 2u);
  EXPECT_EQ(r.trips[0].size(), 300u);
  EXPECT_EQ(r.trips[1].size(), 500u);
  EXPECT_EQ(r.dropped, 0u);
  EXPECT_EQ(r.trips[1].samples.front().t, 302.0);
}

TEST(SplitTrips, ShortRunIsDropped)
{
  const auto r = split_trips(ignition_pattern({{true, 30}}), {60.0});
  EXPECT_TRUE(r.trips.empty());
  EXPECT_EQ(r.dropped, 1u);
}

TEST(SplitTrips, AllOnIsOneTrip)
{
  const auto r = split_trips(ignition_pattern({{true, 3600}}));
  ASSERT_EQ(r.trips.size(), 1u);
  EXPECT_EQ(r.trips[0].size(), 3600u);
  EXPECT_EQ(r.trips[0].dt, 1.0);
}

TEST(SplitTrips, EmptyInput)
{
  const auto r = split_trips(std::vector<Sample>{});
  EXPECT_TRUE(r.trips.empty());
  EXPECT_EQ(r.dropped, 0u);
}

TEST(DeriveSignals, ConstantAcceleration)
{
  const auto trip = test::make_trip({0, 2, 4});
  EXPECT_EQ(trip.accel, (std::vector<double>{2, 2, 2}));
  EXPECT_EQ(trip.dist, (std::vector<double>{0, 0, 2}));
}

TEST(DeriveSignals, ConstantSpeed)
{
  const auto trip = test::make_trip(std::vector<double>(101, 10.0));
  EXPECT_EQ(trip.dist.back(), 1000.0);
  EXPECT_EQ(trip.dist.back() / trip.duration(), 10.0);
}

TEST(DeriveSignals, TooShortIsDegenerate)
{
  TripRecord trip;
  trip.samples.resize(1);
  try {
    derive_signals(trip);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

TEST(DeriveSignals, IntegrationConsistency)
{
  std::mt19937_64 rng(97);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> v(50 + i);
    for (auto & x : v) {
      x = speed(rng);
    }
    const auto trip = test::make_trip(v, 0.5);
    const double mean = std::accumulate(v.begin(), v.end() - 1, 0.0) / (v.size() - 1.0);
    EXPECT_NEAR(trip.dist.back() / trip.duration(), mean, 1e-9);
    for (std::size_t k = 1; k < v.size(); ++k) {
      ASSERT_GE(trip.dist[k], trip.dist[k - 1]);
    }
  }
}

TEST(Resample, TenHertzRampLandsOnIntegers)
{
  TripRecord trip;
  for (int k = 0; k <= 600; ++k) {
    Sample s;
    s.t = k / 10.0;
    s.v = s.t;
    trip.samples.push_back(s);
  }
  const auto out = derive_signals(trip, {true});
  ASSERT_EQ(out.size(), 61u);
  for (std::size_t k = 0; k < out.size(); ++k) {
    EXPECT_EQ(out.samples[k].t, static_cast<double>(k));
    EXPECT_EQ(out.samples[k].v, static_cast<double>(k));
  }
  EXPECT_EQ(out.dt, 1.0);
}

TEST(Resample, OffGridRampInterpolates)
{
  std::vector<Sample> in;
  for (int k = 0; k <= 100; ++k) {
    Sample s;
    s.t = 0.05 + k / 10.0;
    s.v = 3.0 * s.t;
    in.push_back(s);
  }
  const auto out = resample(in, 1.0);
  ASSERT_EQ(out.size(), 11u);
  for (const auto & s : out) {
    EXPECT_NEAR(s.v, 3.0 * s.t, 1e-12);
  }
}

TEST(Resample, OneHertzIsIdentity)
{
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 30.0);
  std::vector<Sample> in;
  for (int k = 0; k < 200; ++k) {
    Sample s;
    s.t = 1000.0 + k;
    s.v = u(rng);
    s.brake_pedal = k % 7 == 0 ? 5.0 : 0.0;
    s.yaw_rate = u(rng) - 15.0;
    if (k % 3 != 0) {
      s.gap = u(rng) + 1.0;
      s.pv_speed = u(rng);
    }
    in.push_back(s);
  }
  EXPECT_EQ(resample(in, 1.0), in);
}

TEST(Resample, PvGapStaysAbsent)
{
  std::vector<Sample> in(3);
  for (int k = 0; k < 3; ++k) {
    in[k].t = 2.0 * k;
    in[k].v = 10.0;
  }
  in[0].gap = 20.0;
  in[0].pv_speed = 10.0;
  const auto out = resample(in, 1.0);
  ASSERT_EQ(out.size(), 5u);
  EXPECT_TRUE(out[0].has_pv());
  EXPECT_FALSE(out[1].has_pv());
}

}  // namespace
}  // namespace trajseg::ingest
