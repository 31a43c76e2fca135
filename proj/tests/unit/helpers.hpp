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

#ifndef TRAJSEG_TESTS__HELPERS_HPP_
#define TRAJSEG_TESTS__HELPERS_HPP_

#include "trajseg/ingest.hpp"
#include "trajseg/types.hpp"

#include <cmath>
#include <vector>

namespace trajseg::test
{

/// Speed profile builder at a fixed step.
class Profile
{
public:
  explicit Profile(double start = 0.0) { v_.push_back(start); }

  Profile & ramp(double target, double rate)
  {
    const double start = v_.back();
    const int n = static_cast<int>(std::ceil(std::abs(target - start) / rate - 1e-9));
    for (int i = 1; i <= n; ++i) {
      v_.push_back(i == n ? target : start + (target - start) * i / n);
    }
    return *this;
  }

  Profile & hold(int samples)
  {
    for (int i = 0; i < samples; ++i) {
      v_.push_back(v_.back());
    }
    return *this;
  }

  Profile & to(double value)
  {
    v_.push_back(value);
    return *this;
  }

  const std::vector<double> & speeds() const { return v_; }

private:
  std::vector<double> v_;
};

inline std::vector<double> clock(std::size_t n, double dt = 1.0)
{
  std::vector<double> t(n);
  for (std::size_t k = 0; k < n; ++k) {
    t[k] = static_cast<double>(k) * dt;
  }
  return t;
}

inline TripRecord make_trip(const std::vector<double> & v, double dt = 1.0)
{
  TripRecord trip;
  for (std::size_t k = 0; k < v.size(); ++k) {
    Sample s;
    s.t = static_cast<double>(k) * dt;
    s.v = v[k];
    trip.samples.push_back(s);
  }
  return ingest::derive_signals(std::move(trip));
}

}  // namespace trajseg::test

#endif  // TRAJSEG_TESTS__HELPERS_HPP_
