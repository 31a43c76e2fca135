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
#include "trajseg/event_search.hpp"

#include "helpers.hpp"
#include "random_series.hpp"
#include "reference.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace trajseg::event_search
{
namespace
{

using IndexList = std::vector<Index>;

EventSearchConfig guard(ZeroGuard zero_guard, double threshold = 5.0)
{
  EventSearchConfig c;
  c.zero_guard = zero_guard;
  c.threshold_mps = threshold;
  return c;
}

TEST(LocalExtremes, RampsAndValleys)
{
  const std::vector<double> v{0, 5, 10, 5, 0, 5, 10};
  const auto e = find_local_extremes(v);
  EXPECT_EQ(e.k_max, (IndexList{2, 6}));
  EXPECT_EQ(e.k_min, (IndexList{0, 4}));
}

TEST(LocalExtremes, ConstantSeriesCollapsesToFirstIndex)
{
  const std::vector<double> v(12, 7.0);
  const auto e = find_local_extremes(v);
  EXPECT_EQ(e.k_max, (IndexList{0}));
  EXPECT_EQ(e.k_min, (IndexList{0}));
}

TEST(LocalExtremes, SymmetricVee)
{
  const std::vector<double> v{10, 0, 10};
  const auto e = find_local_extremes(v);
  EXPECT_EQ(e.k_min, (IndexList{1}));
  EXPECT_EQ(e.k_max, (IndexList{0, 2}));
}

TEST(LocalExtremes, PlateauTakesFirstIndex)
{
  const std::vector<double> v{5, 0, 0, 0, 8, 8, 3};
  const auto e = find_local_extremes(v);
  EXPECT_EQ(e.k_min, (IndexList{1, 6}));
  EXPECT_EQ(e.k_max, (IndexList{0, 4}));
}

TEST(LocalExtremes, ShortSeriesIsDegenerate)
{
  const std::vector<double> v{1, 2};
  try {
    find_local_extremes(v);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDegenerate);
  }
}

TEST(LocalExtremes, MatchesNeighbourComparison)
{
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto s = reference::random_series(rng);
    IndexList k_min;
    IndexList k_max;
    reference::local_extremes(s.v, k_min, k_max);
    const auto e = find_local_extremes(s.v);
    ASSERT_EQ(e.k_min, k_min);
    ASSERT_EQ(e.k_max, k_max);
  }
}

std::vector<double> stop_and_go()
{
  return test::Profile(0).ramp(15, 1.5).hold(20).ramp(0, 2).hold(10).ramp(15, 1.5).hold(5).speeds();
}

TEST(InfluentialExtremes, StopAndGoGivesOnePair)
{
  const auto v = stop_and_go();
  const auto e = search(v, guard(ZeroGuard::kOff));
  ASSERT_EQ(e.k_inf_max.size(), 1u);
  EXPECT_EQ(e.k_inf_max[0], 10u);
  EXPECT_EQ(v[e.k_inf_max[0]], 15.0);
  EXPECT_EQ(e.k_inf_min[0], 38u);
  EXPECT_EQ(v[e.k_inf_min[0]], 0.0);
}

TEST(InfluentialExtremes, LiteralZeroGuardRejectsStops)
{
  const auto v = stop_and_go();
  const auto e = search(v, guard(ZeroGuard::kLiteral));
  EXPECT_TRUE(e.k_inf_max.empty());
  EXPECT_TRUE(e.k_inf_min.empty());
}

TEST(InfluentialExtremes, RippleBelowThreshold)
{
  std::vector<double> v;
  for (int k = 0; k < 300; ++k) {
    v.push_back(20.0 + 2.0 * std::sin(0.3 * k));
  }
  const auto e = search(v, guard(ZeroGuard::kOff));
  EXPECT_TRUE(e.k_inf_min.empty());
  EXPECT_FALSE(e.k_min.empty());
}

TEST(InfluentialExtremes, TwoValleysInOrder)
{
  const auto v = test::Profile(15)
                   .hold(10)
                   .ramp(0, 2)
                   .hold(5)
                   .ramp(15, 1.5)
                   .hold(20)
                   .ramp(0, 2)
                   .hold(5)
                   .ramp(15, 1.5)
                   .hold(5)
                   .speeds();
  const auto e = search(v, guard(ZeroGuard::kOff));
  ASSERT_EQ(e.k_inf_min.size(), 2u);
  EXPECT_EQ(e.k_inf_max, (IndexList{0, 33}));
  EXPECT_EQ(e.k_inf_min, (IndexList{18, 61}));
  EXPECT_NO_THROW(validate(e));
}

TEST(InfluentialExtremes, ThresholdIsStrict)
{
  // A 5 m/s valley sits exactly on the threshold.
  const auto v = test::Profile(20).hold(5).ramp(15, 1).hold(5).ramp(20, 1).hold(5).speeds();
  EXPECT_TRUE(search(v, guard(ZeroGuard::kOff, 5.0)).k_inf_min.empty());
  EXPECT_EQ(search(v, guard(ZeroGuard::kOff, 4.999)).k_inf_min.size(), 1u);
}

TEST(InfluentialExtremes, SmoothingFlattensSpikes)
{
  auto v = test::Profile(20).hold(40).speeds();
  v[20] = 13.0;
  EventSearchConfig c = guard(ZeroGuard::kOff);
  EXPECT_EQ(search(v, c).k_inf_min.size(), 1u);
  c.smoothing_window = 5;
  EXPECT_TRUE(search(v, c).k_inf_min.empty());
}

TEST(Helpers, NextAfterAndMovingAverage)
{
  const IndexList sorted{2, 5, 9};
  EXPECT_EQ(next_after(sorted, 0), 2u);
  EXPECT_EQ(next_after(sorted, 5), 9u);
  EXPECT_FALSE(next_after(sorted, 9).has_value());
  const std::vector<double> v{0, 3, 6, 9};
  EXPECT_EQ(moving_average(v, 1), v);
  const auto m = moving_average(v, 3);
  ASSERT_EQ(m.size(), v.size());
  EXPECT_DOUBLE_EQ(m[1], 3.0);
  EXPECT_DOUBLE_EQ(m[2], 6.0);
}

class RandomSeries : public ::testing::TestWithParam<ZeroGuard>
{
};

TEST_P(RandomSeries, MatchesReferenceModel)
{
  std::mt19937_64 rng(17);
  for (int i = 0; i < 2000; ++i) {
    const auto s = reference::random_series(rng);
    const auto got = search(s.v, guard(GetParam()));
    const auto want =
      reference::event_timing_search(s.v, 5.0, GetParam() == ZeroGuard::kLiteral);
    ASSERT_EQ(got, want) << "series " << i;
  }
}

TEST_P(RandomSeries, ThresholdMonotonicity)
{
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const auto s = reference::random_series(rng);
    std::size_t previous = s.v.size();
    for (double threshold : {1.0, 2.5, 5.0, 7.5, 10.0, 20.0}) {
      const std::size_t pairs = search(s.v, guard(GetParam(), threshold)).k_inf_min.size();
      ASSERT_LE(pairs, previous) << "series " << i << " threshold " << threshold;
      previous = pairs;
    }
  }
}

TEST_P(RandomSeries, EveryPairSpansADropPastThreshold)
{
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) {
    const auto s = reference::random_series(rng);
    const auto e = search(s.v, guard(GetParam()));
    ASSERT_NO_THROW(validate(e));
    Index from = 0;
    for (std::size_t p = 0; p < e.k_inf_min.size(); ++p) {
      double lowest = s.v[from];
      for (Index k = from; k <= e.k_inf_min[p]; ++k) {
        lowest = std::min(lowest, s.v[k]);
      }
      ASSERT_GT(s.v[e.k_inf_max[p]] - lowest, 5.0) << "series " << i << " pair " << p;
      from = e.k_inf_min[p];
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
  ZeroGuards, RandomSeries, ::testing::Values(ZeroGuard::kLiteral, ZeroGuard::kOff),
  [](const auto & info) { return std::string(to_string(info.param)); });

}  // namespace
}  // namespace trajseg::event_search
