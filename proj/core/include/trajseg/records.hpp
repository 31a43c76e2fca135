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

#ifndef TRAJSEG__RECORDS_HPP_
#define TRAJSEG__RECORDS_HPP_

#include "trajseg/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trajseg::records
{

// Single-line JSON round trips of the core types.
std::string to_json(const Sample & sample);
std::string to_json(const TripRecord & trip);
std::string to_json(const ExtremeSet & extremes);
std::string to_json(const Scenario & scenario);
std::string to_json(const Regime & regime);

Sample sample_from_json(std::string_view text);
TripRecord trip_from_json(std::string_view text);
ExtremeSet extremes_from_json(std::string_view text);
Scenario scenario_from_json(std::string_view text);
Regime regime_from_json(std::string_view text);

/// Normalized trip table: canonical column names and units, empty cells for
/// absent channels. with_derived appends accel and dist columns.
std::string trip_to_csv(const TripRecord & trip, bool with_derived = false);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

std::string read_file(const std::filesystem::path & path);
void write_file(const std::filesystem::path & path, std::string_view contents);

/// Non-empty lines of a JSON Lines file.
std::vector<std::string> read_lines(const std::filesystem::path & path);

}  // namespace trajseg::records

#endif  // TRAJSEG__RECORDS_HPP_
