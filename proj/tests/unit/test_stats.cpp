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
#include "trajseg/stats.hpp"

#include "reference.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

namespace trajseg::stats
{
namespace
{

TEST(BoxSummary, FiveValues)
{
  const std::vector<double> x{1, 2, 3, 4, 5};
  const auto b = box_summary(x);
  EXPECT_EQ(b.n, 5u);
  EXPECT_EQ(b.median, 3.0);
  EXPECT_EQ(b.q1, 2.0);
  EXPECT_EQ(b.q3, 4.0);
  EXPECT_EQ(b.whisker_low, 1.0);
  EXPECT_EQ(b.whisker_high, 5.0);
}

TEST(BoxSummary, SinglePoint)
{
  const std::vector<double> x{7};
  const auto b = box_summary(x);
  EXPECT_EQ(b, (BoxSummary{1, 7, 7, 7, 7, 7}));
}

TEST(BoxSummary, OutlierBeyondFence)
{
  const std::vector<double> x{0, 0, 0, 0, 100};
  const auto b = box_summary(x);
  EXPECT_EQ(b.whisker_high, 0.0);
  EXPECT_EQ(b.whisker_low, 0.0);
  EXPECT_EQ(box_summary(x, WhiskerRule::kMinMax).whisker_high, 100.0);
}

TEST(BoxSummary, InterpolatedQuantiles)
{
  const std::vector<double> x{4, 1, 3, 2};
  const auto b = box_summary(x);
  EXPECT_EQ(b.median, 2.5);
  EXPECT_EQ(b.q1, 1.75);
  EXPECT_EQ(b.q3, 3.25);
}

TEST(BoxSummary, EmptyIsDataError)
{
  try {
    box_summary(std::vector<double>{});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
  }
}

std::vector<double> random_values(std::mt19937_64 & rng, std::size_t max_n)
{
  std::uniform_int_distribution<std::size_t> len(1, max_n);
  std::lognormal_distribution<double> heavy(0.0, 1.5);
  std::uniform_int_distribution<int> small(0, 5);
  const std::size_t n = len(rng);
  const bool ties = n % 3 == 0;
  std::vector<double> x(n);
  for (auto & v : x) {
    v = ties ? small(rng) : heavy(rng);
  }
  return x;
}

TEST(BoxSummary, MatchesFullSortReference)
{
  std::mt19937_64 rng(47);
  for (int i = 0; i < 300; ++i) {
    const auto x = random_values(rng, 2000);
    ASSERT_EQ(box_summary(x), reference::box_summary(x)) << "vector " << i;
  }
}

TEST(BoxSummary, PermutationInvariant)
{
  std::mt19937_64 rng(53);
  for (int i = 0; i < 100; ++i) {
    auto x = random_values(rng, 500);
    const auto before = box_summary(x);
    std::shuffle(x.begin(), x.end(), rng);
    ASSERT_EQ(box_summary(x), before);
  }
}

TEST(Accumulator, ExactBelowCap)
{
  Accumulator acc(10, 4, 1);
  for (int i = 0; i < 10; ++i) {
    acc.add(i);
  }
  EXPECT_TRUE(acc.exact());
  EXPECT_EQ(acc.values().size(), 10u);
  acc.add(10);
  EXPECT_FALSE(acc.exact());
  EXPECT_EQ(acc.count(), 11u);
  EXPECT_EQ(acc.values().size(), 4u);
}

TEST(Accumulator, ReservoirTracksTheDistribution)
{
  Accumulator acc(1000, 5000, 7);
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200'000; ++i) {
    acc.add(u(rng));
  }
  EXPECT_EQ(acc.count(), 200'000u);
  EXPECT_EQ(acc.values().size(), 5000u);
  const auto b = box_summary(acc.values());
  EXPECT_NEAR(b.median, 0.5, 0.03);
  EXPECT_NEAR(b.q1, 0.25, 0.03);
}

TEST(BinnedAccumulator, ShardMergeEqualsSinglePass)
{
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> key(0.0, 35.0);
  std::normal_distribution<double> value(10.0, 3.0);
  const Binning binning{"speed", 5.0, 0.0};
  const StatsConfig config;
  std::vector<std::pair<double, double>> data(5000);
  for (auto & [k, v] : data) {
    k = key(rng);
    v = value(rng);
  }
  BinnedAccumulator single(binning, config);
  std::vector<BinnedAccumulator> shards(4, BinnedAccumulator(binning, config));
  for (std::size_t i = 0; i < data.size(); ++i) {
    single.add(data[i].first, data[i].second);
    shards[i % 4].add(data[i].first, data[i].second);
  }
  BinnedAccumulator left = shards[0];
  left.merge(shards[1]);
  left.merge(shards[2]);
  left.merge(shards[3]);
  BinnedAccumulator right = shards[2];
  right.merge(shards[3]);
  BinnedAccumulator outer = shards[0];
  outer.merge(shards[1]);
  outer.merge(right);

  const auto expected = single.summarize();
  for (const auto & got : {left.summarize(), outer.summarize()}) {
    ASSERT_EQ(got.bins.size(), expected.bins.size());
    for (std::size_t b = 0; b < got.bins.size(); ++b) {
      EXPECT_EQ(got.bins[b].lo, expected.bins[b].lo);
      EXPECT_EQ(got.bins[b].box, expected.bins[b].box);
    }
  }
}

TEST(BinnedAccumulator, ReservoirMergeKeepsCounts)
{
  StatsConfig config;
  config.exact_cap = 500;
  config.reservoir_size = 400;
  const Binning binning{"speed", 5.0, 0.0};
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  BinnedAccumulator a(binning, config);
  BinnedAccumulator b(binning, config);
  for (int i = 0; i < 3000; ++i) {
    (i % 3 == 0 ? a : b).add(2.0, u(rng));
  }
  a.merge(b);
  const auto s = a.summarize();
  ASSERT_EQ(s.bins.size(), 1u);
  EXPECT_EQ(s.bins[0].box.n, 3000u);
  EXPECT_NEAR(s.bins[0].box.median, 0.5, 0.1);
}

std::vector<Record> records_of(const std::vector<std::pair<double, double>> & kv)
{
  std::vector<Record> out;
  for (const auto & [k, v] : kv) {
    out.push_back({{"avg_speed_mps", k}, {"distance_km", v}});
  }
  return out;
}

TEST(BinAndSummarize, OneBin)
{
  const auto records = records_of({{5.0, 1.0}, {7.5, 2.0}, {9.99, 3.0}});
  const auto s = bin_and_summarize(records, "avg_speed_mps", "distance_km", {"", 5.0, 0.0});
  ASSERT_EQ(s.bins.size(), 1u);
  EXPECT_EQ(s.bins[0].lo, 5.0);
  EXPECT_EQ(s.bins[0].hi, 10.0);
  EXPECT_EQ(s.bins[0].box.median, 2.0);
}

TEST(BinAndSummarize, SymmetricBins)
{
  std::vector<std::pair<double, double>> kv;
  for (int i = 0; i < 20; ++i) {
    kv.push_back({1.0, i});
    kv.push_back({6.0, i});
  }
  const auto s =
    bin_and_summarize(records_of(kv), "avg_speed_mps", "distance_km", {"", 5.0, 0.0});
  ASSERT_EQ(s.bins.size(), 2u);
  EXPECT_EQ(s.bins[0].box, s.bins[1].box);
}

TEST(BinAndSummarize, EmptyBinsAreListed)
{
  const auto s = bin_and_summarize(
    records_of({{1.0, 1.0}, {17.0, 2.0}}), "avg_speed_mps", "distance_km", {"", 5.0, 0.0});
  ASSERT_EQ(s.bins.size(), 2u);
  ASSERT_EQ(s.empty_bins.size(), 2u);
  EXPECT_EQ(s.empty_bins[0].first, 5.0);
  EXPECT_EQ(s.empty_bins[1].second, 15.0);
}

TEST(BinAndSummarize, PlantedLinearRule)
{
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  std::vector<std::pair<double, double>> kv;
  for (int i = 0; i < 10'000; ++i) {
    const double v = speed(rng);
    kv.push_back({v, 100.0 * std::floor(v / 5.0)});
  }
  const auto s =
    bin_and_summarize(records_of(kv), "avg_speed_mps", "distance_km", {"", 5.0, 0.0});
  ASSERT_EQ(s.bins.size(), 7u);
  for (const auto & bin : s.bins) {
    EXPECT_EQ(bin.box.median, 100.0 * bin.lo / 5.0);
  }
}

TEST(BinAndSummarize, UnknownFieldIsSchemaError)
{
  try {
    bin_and_summarize(records_of({{1.0, 1.0}}), "avg_speed_mps", "fuel", {"", 5.0, 0.0});
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSchema);
  }
}

TEST(BinAndSummarize, MissingValuesAreSkipped)
{
  std::vector<Record> records = records_of({{1.0, 1.0}, {2.0, 3.0}});
  records.push_back({{"avg_speed_mps", 3.0}});
  const auto s = bin_and_summarize(records, "avg_speed_mps", "distance_km", {"", 5.0, 0.0});
  EXPECT_EQ(s.skipped, 1u);
  EXPECT_EQ(s.bins[0].box.n, 2u);
}

std::vector<EnvelopePoint> planted_envelope(
  double c0, std::size_t n, double outlier_rate, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> log_k(std::log(0.002), std::log(0.2));
  std::uniform_real_distribution<double> below(0.3, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<EnvelopePoint> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::exp(log_k(rng));
    const double envelope = c0 / std::sqrt(k);
    const bool outlier = unit(rng) < outlier_rate;
    out.push_back({k, envelope * (outlier ? 1.5 + unit(rng) : below(rng))});
  }
  return out;
}

TEST(TurningEnvelope, RecoversPlantedCoefficient)
{
  const auto points = planted_envelope(2.0, 10'000, 0.0, 73);
  const auto env = fit_turning_envelope(points);
  EXPECT_NEAR(env.c0, 2.0, 0.1);
  EXPECT_EQ(env.bins.size(), 10u);
}

TEST(TurningEnvelope, TracksQuantileNotMaximum)
{
  const auto points = planted_envelope(2.0, 10'000, 0.001, 79);
  const auto env = fit_turning_envelope(points);
  EXPECT_NEAR(env.c0, 2.0, 0.1);
  double worst = 0.0;
  for (const auto & p : points) {
    worst = std::max(worst, p.speed * std::sqrt(p.curvature));
  }
  EXPECT_GT(worst, 2.9);
}

TEST(TurningEnvelope, OutliersStayWithinToleranceAcrossSeeds)
{
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto env = fit_turning_envelope(planted_envelope(2.0, 10'000, 0.001, seed));
    EXPECT_LT(std::abs(env.c0 - 2.0) / 2.0, 0.05) << "seed " << seed;
  }
}

TEST(TurningEnvelope, SingleCurvatureIsUnderdetermined)
{
  std::vector<EnvelopePoint> points(5000, EnvelopePoint{0.01, 15.0});
  try {
    fit_turning_envelope(points);
    FAIL();
  } catch (const Error & e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUnderdetermined);
    EXPECT_NE(std::string(e.what()).find("deficient bins"), std::string::npos);
  }
}

TEST(TurningEnvelope, TooFewPointsIsUnderdetermined)
{
  const auto points = planted_envelope(2.0, 500, 0.0, 83);
  EXPECT_THROW(fit_turning_envelope(points), Error);
}

TEST(TurningEnvelope, SpeedCapAtLowCurvature)
{
  auto points = planted_envelope(2.0, 20'000, 0.0, 89);
  for (auto & p : points) {
    p.speed = std::min(p.speed, 25.0 * p.speed / (2.0 / std::sqrt(p.curvature)));
  }
  const auto env = fit_turning_envelope(points);
  EXPECT_NEAR(env.c0, 2.0, 0.1);
  EXPECT_NEAR(env.v_cap, 25.0, 2.5);
  EXPECT_NEAR(env.evaluate(0.001), env.v_cap, 1e-12);
}

}  // namespace
}  // namespace trajseg::stats
