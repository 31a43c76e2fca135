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

#include "trajseg/stats.hpp"

#include "trajseg/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace trajseg::stats
{

double sorted_quantile(std::span<const double> sorted, double p)
{
  if (sorted.empty()) {
    throw Error(ErrorKind::kData, "quantile of an empty sample");
  }
  const double h = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) {
    return sorted.back();
  }
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

BoxSummary box_summary(std::span<const double> values, WhiskerRule rule, double whisker_iqr)
{
  if (values.empty()) {
    throw Error(ErrorKind::kData, "box summary of an empty sample");
  }
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());

  BoxSummary b;
  b.n = x.size();
  b.q1 = sorted_quantile(x, 0.25);
  b.median = sorted_quantile(x, 0.5);
  b.q3 = sorted_quantile(x, 0.75);
  if (rule == WhiskerRule::kMinMax) {
    b.whisker_low = x.front();
    b.whisker_high = x.back();
    return b;
  }
  const double reach = whisker_iqr * (b.q3 - b.q1);
  const double lo_fence = b.q1 - reach;
  const double hi_fence = b.q3 + reach;
  b.whisker_low = *std::lower_bound(x.begin(), x.end(), lo_fence);
  b.whisker_high = *(std::upper_bound(x.begin(), x.end(), hi_fence) - 1);
  return b;
}

Accumulator::Accumulator(std::size_t exact_cap, std::size_t reservoir_size, std::uint64_t seed)
: exact_cap_(exact_cap), reservoir_size_(std::max<std::size_t>(1, reservoir_size)), rng_(seed)
{
}

void Accumulator::to_reservoir()
{
  // Partial Fisher-Yates: the first reservoir_size_ slots become a uniform
  // sample without replacement.
  for (std::size_t i = 0; i < reservoir_size_ && i < values_.size(); ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, values_.size() - 1);
    std::swap(values_[i], values_[pick(rng_)]);
  }
  if (values_.size() > reservoir_size_) {
    values_.resize(reservoir_size_);
  }
  values_.shrink_to_fit();
  exact_ = false;
}

void Accumulator::add(double value)
{
  ++seen_;
  if (exact_) {
    values_.push_back(value);
    if (values_.size() > exact_cap_) {
      to_reservoir();
    }
    return;
  }
  // Nothing has been discarded yet, so the sample is still the whole stream.
  if (values_.size() < reservoir_size_ && values_.size() + 1 == seen_) {
    values_.push_back(value);
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, seen_ - 1);
  const std::size_t j = pick(rng_);
  if (j < values_.size()) {
    values_[j] = value;
  }
}

void Accumulator::merge(const Accumulator & other)
{
  if (other.seen_ == 0) {
    return;
  }
  if (exact_ && other.exact_ && values_.size() + other.values_.size() <= exact_cap_) {
    values_.insert(values_.end(), other.values_.begin(), other.values_.end());
    seen_ += other.seen_;
    return;
  }

  // Weighted sampling without replacement: each retained value stands for
  // count / retained original observations.
  struct Keyed
  {
    double key;
    double value;
  };
  std::vector<Keyed> pool;
  pool.reserve(values_.size() + other.values_.size());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto add_side = [&](std::span<const double> side, std::size_t count) {
    if (side.empty()) {
      return;
    }
    const double weight = static_cast<double>(count) / static_cast<double>(side.size());
    for (double x : side) {
      double u = unit(rng_);
      while (u <= 0.0) {
        u = unit(rng_);
      }
      pool.push_back({std::log(u) / weight, x});
    }
  };
  add_side(values_, seen_);
  add_side(other.values_, other.seen_);

  const std::size_t keep = std::min(reservoir_size_, pool.size());
  std::partial_sort(
    pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(keep), pool.end(),
    [](const Keyed & a, const Keyed & b) { return a.key > b.key; });
  values_.clear();
  for (std::size_t i = 0; i < keep; ++i) {
    values_.push_back(pool[i].value);
  }
  seen_ += other.seen_;
  exact_ = false;
}

long long Binning::bin_of(double x) const
{
  return static_cast<long long>(std::floor((x - origin) / width));
}

BinnedAccumulator::BinnedAccumulator(Binning binning, StatsConfig config)
: binning_(std::move(binning)), config_(config)
{
}

void BinnedAccumulator::add(double key, double value)
{
  const long long bin = binning_.bin_of(key);
  auto it = cells_.find(bin);
  if (it == cells_.end()) {
    it = cells_
           .emplace(
             bin, Accumulator(
                    config_.exact_cap, config_.reservoir_size,
                    config_.seed + static_cast<std::uint64_t>(bin)))
           .first;
  }
  it->second.add(value);
}

void BinnedAccumulator::merge(const BinnedAccumulator & other)
{
  for (const auto & [bin, cell] : other.cells_) {
    auto it = cells_.find(bin);
    if (it == cells_.end()) {
      cells_.emplace(bin, cell);
    } else {
      it->second.merge(cell);
    }
  }
}

BinnedSummaries BinnedAccumulator::summarize() const
{
  BinnedSummaries out;
  std::optional<long long> previous;
  for (const auto & [bin, cell] : cells_) {
    if (previous) {
      for (long long gap = *previous + 1; gap < bin; ++gap) {
        out.empty_bins.emplace_back(binning_.lo(gap), binning_.hi(gap));
      }
    }
    out.bins.push_back(
      {binning_.lo(bin), binning_.hi(bin),
       box_summary(cell.values(), config_.whiskers, config_.whisker_iqr)});
    // The box reports observations seen, not values retained.
    out.bins.back().box.n = cell.count();
    previous = bin;
  }
  return out;
}

BinnedSummaries bin_and_summarize(
  std::span<const Record> records, const std::string & key, const std::string & value,
  const Binning & binning, const StatsConfig & config)
{
  bool key_seen = false;
  bool value_seen = false;
  BinnedAccumulator acc(binning, config);
  std::size_t skipped = 0;
  for (const auto & r : records) {
    auto k = r.find(key);
    auto v = r.find(value);
    key_seen = key_seen || k != r.end();
    value_seen = value_seen || v != r.end();
    if (k == r.end() || v == r.end() || !std::isfinite(k->second) || !std::isfinite(v->second)) {
      ++skipped;
      continue;
    }
    acc.add(k->second, v->second);
  }
  if (!records.empty() && (!key_seen || !value_seen)) {
    throw Error(
      ErrorKind::kSchema,
      "unknown field '" + (key_seen ? value : key) + "' in records");
  }
  BinnedSummaries out = acc.summarize();
  out.skipped = skipped;
  return out;
}

double TurningEnvelope::evaluate(double curvature) const
{
  return std::min(c0 / std::sqrt(curvature), v_cap);
}

namespace
{

// Quantile of the values at or below the upper Tukey fence.
double fenced_quantile(std::span<const double> sorted, double p, double fence_iqr)
{
  if (fence_iqr <= 0.0) {
    return sorted_quantile(sorted, p);
  }
  const double q1 = sorted_quantile(sorted, 0.25);
  const double q3 = sorted_quantile(sorted, 0.75);
  const auto kept = std::upper_bound(sorted.begin(), sorted.end(), q3 + fence_iqr * (q3 - q1));
  return sorted_quantile(sorted.first(static_cast<std::size_t>(kept - sorted.begin())), p);
}

}  // namespace

TurningEnvelope fit_turning_envelope(
  std::span<const EnvelopePoint> points, const StatsConfig & config)
{
  std::vector<EnvelopePoint> usable;
  usable.reserve(points.size());
  for (const auto & p : points) {
    if (p.curvature > 0.0 && std::isfinite(p.curvature) && std::isfinite(p.speed)) {
      usable.push_back(p);
    }
  }
  const auto bins = static_cast<std::size_t>(config.envelope_bins);

  double c_lo = std::numeric_limits<double>::infinity();
  double c_hi = 0.0;
  for (const auto & p : usable) {
    c_lo = std::min(c_lo, p.curvature);
    c_hi = std::max(c_hi, p.curvature);
  }

  std::vector<std::vector<double>> speeds(bins);
  std::vector<std::vector<double>> coefficients(bins);
  std::vector<double> edges(bins + 1, c_lo);
  const bool spread = !usable.empty() && c_hi > c_lo;
  if (spread) {
    const double step = (std::log(c_hi) - std::log(c_lo)) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
      edges[i] = std::exp(std::log(c_lo) + step * static_cast<double>(i));
    }
    edges[bins] = c_hi;
    for (const auto & p : usable) {
      auto i = static_cast<std::size_t>((std::log(p.curvature) - std::log(c_lo)) / step);
      const std::size_t bin = std::min(i, bins - 1);
      speeds[bin].push_back(p.speed);
      coefficients[bin].push_back(p.speed * std::sqrt(p.curvature));
    }
  } else if (!usable.empty()) {
    for (const auto & p : usable) {
      speeds[0].push_back(p.speed);
      coefficients[0].push_back(p.speed * std::sqrt(p.curvature));
    }
  }

  std::vector<std::size_t> supported;
  for (std::size_t i = 0; i < bins; ++i) {
    if (speeds[i].size() >= config.envelope_min_bin_points) {
      supported.push_back(i);
    }
  }
  if (
    usable.size() < config.envelope_min_points ||
    supported.size() < static_cast<std::size_t>(config.envelope_min_bins)) {
    std::ostringstream msg;
    msg << "turning envelope is underdetermined: " << usable.size() << " points, "
        << supported.size() << " supported bins; deficient bins:";
    for (std::size_t i = 0; i < bins; ++i) {
      if (speeds[i].size() < config.envelope_min_bin_points) {
        msg << " [" << edges[i] << ", " << edges[i + 1] << ") n=" << speeds[i].size() << ";";
      }
    }
    throw Error(ErrorKind::kUnderdetermined, msg.str());
  }

  TurningEnvelope env;
  for (std::size_t i = 0; i < bins; ++i) {
    EnvelopeBin b;
    b.curvature_lo = edges[i];
    b.curvature_hi = edges[i + 1];
    b.n = speeds[i].size();
    b.curvature = std::sqrt(edges[i] * edges[i + 1]);
    if (!speeds[i].empty()) {
      std::sort(speeds[i].begin(), speeds[i].end());
      b.speed_quantile =
        fenced_quantile(speeds[i], config.envelope_quantile, config.envelope_fence_iqr);
      std::sort(coefficients[i].begin(), coefficients[i].end());
      b.coefficient_quantile =
        fenced_quantile(coefficients[i], config.envelope_quantile, config.envelope_fence_iqr);
    }
    env.bins.push_back(b);
  }

  // Hinge model: the first m supported bins (lowest curvature) sit at v_cap,
  // the rest on c0 / sqrt(k). Capped bins are scored on their speed quantile,
  // the others on the quantile of v * sqrt(k), which does not drift with the
  // curvature spread inside a bin. c0 is the median of those per-bin
  // coefficients, so a bin that caught stray points cannot drag it. Pick the
  // admissible m with the least SSE.
  const std::size_t count = supported.size();
  std::vector<double> u(count);
  std::vector<double> q(count);
  std::vector<double> c(count);
  for (std::size_t j = 0; j < count; ++j) {
    const EnvelopeBin & b = env.bins[supported[j]];
    u[j] = 1.0 / std::sqrt(b.curvature);
    q[j] = b.speed_quantile;
    c[j] = b.coefficient_quantile;
  }
  double best_sse = std::numeric_limits<double>::infinity();
  double best_c0 = 0.0;
  double best_cap = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < count; ++m) {
    double cap = std::numeric_limits<double>::infinity();
    if (m > 0) {
      cap = std::accumulate(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(m), 0.0) /
            static_cast<double>(m);
    }
    std::vector<double> tail(c.begin() + static_cast<std::ptrdiff_t>(m), c.end());
    std::sort(tail.begin(), tail.end());
    const double c0 = sorted_quantile(tail, 0.5);
    bool admissible = true;
    for (std::size_t j = 0; j < count && admissible; ++j) {
      admissible = j < m ? c0 * u[j] >= cap : c0 * u[j] <= cap;
    }
    if (!admissible) {
      continue;
    }
    double sse = 0.0;
    for (std::size_t j = 0; j < count; ++j) {
      const double miss = j < m ? q[j] - cap : (c[j] - c0) * u[j];
      sse += miss * miss;
    }
    if (sse < best_sse) {
      best_sse = sse;
      best_c0 = c0;
      best_cap = cap;
    }
  }
  env.c0 = best_c0;
  env.v_cap = best_cap;
  for (auto & b : env.bins) {
    if (b.n > 0) {
      b.fitted = env.evaluate(b.curvature);
      b.residual = b.speed_quantile - b.fitted;
    }
  }
  return env;
}

}  // namespace trajseg::stats
