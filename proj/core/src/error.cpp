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

namespace trajseg
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::kUsage:
      return "usage";
    case ErrorKind::kSchema:
      return "schema";
    case ErrorKind::kData:
      return "data";
    case ErrorKind::kDegenerate:
      return "degenerate";
    case ErrorKind::kNotApplicable:
      return "not_applicable";
    case ErrorKind::kMissingSignal:
      return "missing_signal";
    case ErrorKind::kContract:
      return "contract";
    case ErrorKind::kPlan:
      return "plan";
    case ErrorKind::kUnderdetermined:
      return "underdetermined";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

int exit_code(ErrorKind kind) noexcept
{
  switch (kind) {
    case ErrorKind::kUsage:
      return 1;
    case ErrorKind::kSchema:
      return 2;
    default:
      return 3;
  }
}

}  // namespace trajseg
