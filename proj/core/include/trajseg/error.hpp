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

#ifndef TRAJSEG__ERROR_HPP_
#define TRAJSEG__ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace trajseg
{

enum class ErrorKind {
  kUsage,
  kSchema,
  kData,
  kDegenerate,
  kNotApplicable,
  kMissingSignal,
  kContract,
  kPlan,
  kUnderdetermined,
  kIo,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so the CLI can map it
/// onto a stable exit code.
class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string & message, std::optional<std::size_t> row = std::nullopt)
  : std::runtime_error(message), kind_(kind), row_(row)
  {
  }

  ErrorKind kind() const noexcept { return kind_; }

  /// 1-based data row (header excluded) for parse failures.
  std::optional<std::size_t> row() const noexcept { return row_; }

private:
  ErrorKind kind_;
  std::optional<std::size_t> row_;
};

/// 1 usage, 2 schema, 3 data and everything else.
int exit_code(ErrorKind kind) noexcept;

}  // namespace trajseg

#endif  // TRAJSEG__ERROR_HPP_
