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

#ifndef TRAJSEG__STATS_HPP_
#define TRAJSEG__STATS_HPP_

#include "trajseg/config.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace trajseg::stats
{

struct BoxSummary
{
  std::size_t n{0};
  double median{0.0};
  double q1{0.0};
  double q3{0.0};
  double whisker_low{0.0};
  double whisker_high{0.0};

  bool operator==(const BoxSummary &) const = default;
};

/// Quantile of an ascending-sorted sample by linear interpolation between
/// order statistics: h = (n - 1) p.
double sorted_quantile(std::span<const double> sorted, double p);

/// Median and quartiles by linear interpolation; whiskers at the most extreme
/// data points within whisker_iqr * IQR of the quartiles (or min/max).
/// Error(kData) on empty input.
BoxSummary box_summary(
  std::span<const double> values, WhiskerRule rule = WhiskerRule::kTukey,
  double whisker_iqr = 1.5);

/// Exact value store that switches to seeded reservoir sampling once
/// exact_cap values have been seen.
class Accumulator
{
public:
  explicit Accumulator(
    std::size_t exact_cap = 1'000'000, std::size_t reservoir_size = 100'000,
    std::uint64_t seed = 0);

  void add(double value);
  /// Commutative for exact cells; reservoir cells are resampled in
  /// proportion to the counts they represent.
  void merge(const Accumulator & other);

  std::size_t count() const noexcept { return seen_; }
  bool exact() const noexcept { return exact_; }
  std::span<const double> values() const noexcept { return values_; }

private:
  void to_reservoir();

  std::size_t exact_cap_;
  std::size_t reservoir_size_;
  std::size_t seen_{0};
  bool exact_{true};
  std::vector<double> values_;
  std::mt19937_64 rng_;
};

struct Binning
{
  std::string key;
  double width{5.0};
  double origin{0.0};

  /// Index of the [lo, hi) bin holding x.
  long long bin_of(double x) const;
  double lo(long long bin) const { return origin + static_cast<double>(bin) * width; }
  double hi(long long bin) const { return origin + static_cast<double>(bin + 1) * width; }
};

/// Flat record of named numeric fields; a missing name means "absent".
using Record = std::unordered_map<std::string, double>;

struct BinSummary
{
  double lo{0.0};
  double hi{0.0};
  BoxSummary box;
};

struct BinnedSummaries
{
  std::vector<BinSummary> bins;
  /// Empty bins between the first and last populated bin.
  std::vector<std::pair<double, double>> empty_bins;
  /// Records lacking the key or value field.
  std::size_t skipped{0};
};

/// One BoxSummary per populated bin of `key`. Error(kSchema) when no record
/// carries the key or value field at all.
BinnedSummaries bin_and_summarize(
  std::span<const Record> records, const std::string & key, const std::string & value,
  const Binning & binning, const StatsConfig & config = {});

/// Shard-mergeable per-bin accumulators keyed by bin index.
class BinnedAccumulator
{
public:
  BinnedAccumulator(Binning binning, StatsConfig config);
  void add(double key, double value);
  void merge(const BinnedAccumulator & other);
  BinnedSummaries summarize() const;

private:
  Binning binning_;
  StatsConfig config_;
  std::map<long long, Accumulator> cells_;
};

struct EnvelopeBin
{
  double curvature_lo{0.0};
  double curvature_hi{0.0};
  std::size_t n{0};
  /// Representative curvature (geometric bin center).
  double curvature{0.0};
  double speed_quantile{0.0};
  /// Quantile of v * sqrt(k) over the bin.
  double coefficient_quantile{0.0};
  double fitted{0.0};
  double residual{0.0};
};

/// v_max(k) = min(c0 / sqrt(k), v_cap); v_cap is +infinity when no bin is
/// clipped.
struct TurningEnvelope
{
  double c0{0.0};
  double v_cap{0.0};
  std::vector<EnvelopeBin> bins;

  double evaluate(double curvature) const;
};

struct EnvelopePoint
{
  double curvature{0.0};
  double speed{0.0};
};

/// Per log-spaced curvature bin take the configured speed quantile, then
/// least-squares fit c0 and the clip level v_cap. Error(kUnderdetermined)
/// listing deficient bins when support is too thin.
TurningEnvelope fit_turning_envelope(
  std::span<const EnvelopePoint> points, const StatsConfig & config = {});

}  // namespace trajseg::stats

#endif  // TRAJSEG__STATS_HPP_
