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

#ifndef SGDIFF_TOOLS_VERIFY_HPP_
#define SGDIFF_TOOLS_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sgdiff::tools {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  nlohmann::ordered_json detail;
};

struct VerifyReport {
  std::string kind;
  std::vector<VerifyCheck> checks;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

std::vector<std::string> verify_kinds();

/// Throws PreconditionError for an unknown kind.
VerifyReport run_verify(std::string_view kind, std::uint64_t seed);

}  // namespace sgdiff::tools

#endif  // SGDIFF_TOOLS_VERIFY_HPP_
