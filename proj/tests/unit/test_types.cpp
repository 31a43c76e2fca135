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
#include "trajseg/types.hpp"

#include <gtest/gtest.h>

#include <vector>

namespace trajseg
{
namespace
{

ErrorKind kind_of(auto && fn)
{
  try {
    fn();
  } catch (const Error & e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kIo;
}

TEST(Sample, AcceptsMinimalRecord)
{
  Sample s;
  s.v = 3.0;
  EXPECT_NO_THROW(validate(s));
}

TEST(Sample, RejectsNegativeSpeed)
{
  Sample s;
  s.v = -0.1;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kData);
}

TEST(Sample, GapAndPvSpeedTravelTogether)
{
  Sample s;
  s.gap = 20.0;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kData);
  s.pv_speed = 10.0;
  EXPECT_NO_THROW(validate(s));
  s.gap.reset();
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kData);
}

TEST(Sample, GapMustBePositive)
{
  Sample s;
  s.gap = 0.0;
  s.pv_speed = 5.0;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kData);
}

TEST(Sample, FuelFlowMustBeNonNegative)
{
  Sample s;
  s.fuel_flow = -1.0;
  EXPECT_EQ(kind_of([&] { validate(s); }), ErrorKind::kData);
}

TEST(Sample, PedalPressedMeansPositive)
{
  Sample s;
  EXPECT_FALSE(s.brake_pressed());
  s.brake_pedal = 0.0;
  EXPECT_FALSE(s.brake_pressed());
  s.brake_pedal = 5.0;
  EXPECT_TRUE(s.brake_pressed());
  s.accel_pedal = 0.5;
  EXPECT_TRUE(s.accel_pressed());
}

TEST(ExtremeSet, AcceptsInterleavedPairs)
{
  ExtremeSet e{{0, 4, 9}, {2, 6, 11}, {4, 9}, {2, 6}};
  EXPECT_NO_THROW(validate(e));
}

TEST(ExtremeSet, RejectsUnequalLengths)
{
  ExtremeSet e{{0, 4}, {2}, {4}, {}};
  EXPECT_EQ(kind_of([&] { validate(e); }), ErrorKind::kContract);
}

TEST(ExtremeSet, RejectsInfluentialOutsideLocalSet)
{
  ExtremeSet e{{0, 4}, {2}, {5}, {2}};
  EXPECT_EQ(kind_of([&] { validate(e); }), ErrorKind::kContract);
}

TEST(ExtremeSet, RejectsMinimumBeforeMaximum)
{
  ExtremeSet e{{0, 4}, {2, 6}, {4}, {6}};
  EXPECT_EQ(kind_of([&] { validate(e); }), ErrorKind::kContract);
}

TEST(ExtremeSet, RejectsOverlappingPairs)
{
  ExtremeSet e{{0, 4, 9}, {2, 3, 11}, {4, 9}, {2, 3}};
  EXPECT_EQ(kind_of([&] { validate(e); }), ErrorKind::kContract);
}

Scenario span(Index k0, Index kf, ScenarioType type = ScenarioType::kCrs)
{
  Scenario s;
  s.k0 = k0;
  s.kf = kf;
  s.type = type;
  return s;
}

TEST(ScenarioCover, AcceptsSharedEndpoints)
{
  std::vector<Scenario> cover{span(0, 10), span(10, 25, ScenarioType::kBSnA), span(25, 30)};
  EXPECT_NO_THROW(validate_cover(cover, 30));
}

TEST(ScenarioCover, RejectsHoleOverlapAndShortSpan)
{
  EXPECT_EQ(
    kind_of([] { validate_cover(std::vector<Scenario>{span(0, 10), span(12, 30)}, 30); }),
    ErrorKind::kContract);
  EXPECT_EQ(
    kind_of([] { validate_cover(std::vector<Scenario>{span(0, 10), span(8, 30)}, 30); }),
    ErrorKind::kContract);
  EXPECT_EQ(
    kind_of([] { validate_cover(std::vector<Scenario>{span(0, 20)}, 30); }), ErrorKind::kContract);
  EXPECT_EQ(
    kind_of([] { validate_cover(std::vector<Scenario>{span(0, 0), span(0, 30)}, 30); }),
    ErrorKind::kContract);
  EXPECT_EQ(kind_of([] { validate_cover(std::vector<Scenario>{}, 30); }), ErrorKind::kContract);
}

TEST(EnumNames, RoundTrip)
{
  for (auto type : kAllScenarioTypes) {
    EXPECT_EQ(scenario_type_from_string(to_string(type)), type);
  }
  for (auto type : kAllRegimeTypes) {
    EXPECT_EQ(regime_type_from_string(to_string(type)), type);
  }
  for (auto level : kAllRiskLevels) {
    EXPECT_EQ(risk_level_from_string(to_string(level)), level);
  }
  EXPECT_EQ(to_string(ScenarioType::kBSnA), "BSnA");
  EXPECT_EQ(to_string(RegimeType::kCst), "Cst");
}

TEST(EnumNames, UnknownNameIsSchemaError)
{
  EXPECT_EQ(kind_of([] { scenario_type_from_string("Cruise"); }), ErrorKind::kSchema);
  EXPECT_EQ(kind_of([] { regime_type_from_string("X"); }), ErrorKind::kSchema);
  EXPECT_EQ(kind_of([] { risk_level_from_string(""); }), ErrorKind::kSchema);
}

TEST(ErrorKinds, ExitCodes)
{
  EXPECT_EQ(exit_code(ErrorKind::kUsage), 1);
  EXPECT_EQ(exit_code(ErrorKind::kSchema), 2);
  EXPECT_EQ(exit_code(ErrorKind::kData), 3);
  EXPECT_EQ(exit_code(ErrorKind::kPlan), 3);
}

TEST(TripRecord, AccessorsFollowSamples)
{
  TripRecord trip;
  EXPECT_EQ(trip.duration(), 0.0);
  EXPECT_FALSE(trip.has_derived());
  for (int k = 0; k < 4; ++k) {
    Sample s;
    s.t = 10.0 + k;
    s.v = 2.0 * k;
    trip.samples.push_back(s);
  }
  EXPECT_EQ(trip.last(), 3u);
  EXPECT_DOUBLE_EQ(trip.duration(), 3.0);
  EXPECT_EQ(trip.speeds(), (std::vector<double>{0, 2, 4, 6}));
  EXPECT_EQ(trip.times(), (std::vector<double>{10, 11, 12, 13}));
}

}  // namespace
}  // namespace trajseg
