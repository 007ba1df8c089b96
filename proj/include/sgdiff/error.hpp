// Copyright 2026 The sgdiff Authors
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

#ifndef SGDIFF_ERROR_HPP_
#define SGDIFF_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace sgdiff {

/// Violated precondition on an argument (bad index, malformed graph, ...).
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical routine produced a non-finite value or hit a degenerate
/// denominator.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse or I/O failure while reading a dataset, checkpoint or config.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SGDIFF_REQUIRE(cond, msg)                          \
  do {                                                     \
    if (!(cond)) throw ::sgdiff::PreconditionError(msg);   \
  } while (0)

}  // namespace sgdiff

#endif  // SGDIFF_ERROR_HPP_
