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

#ifndef SGDIFF_CHECKPOINT_HPP_
#define SGDIFF_CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgdiff/network.hpp"

namespace sgdiff {

// Layout, all integers little-endian:
//   "SGDIFFCK"                 8 bytes
//   version                    u32
//   seed                       u64
//   config hash                u64
//   metadata length, bytes     u64, compact JSON {"network": ..., ...}
//   tensor count               u64
//   per tensor: name length u32, name bytes, rank u32 (= 2),
//               rows u64, cols u64, row-major f64 values
inline constexpr char kCheckpointMagic[8] = {'S', 'G', 'D', 'I', 'F', 'F', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// `metadata` must hold the network config under "network"; other keys
/// (schedule, marginals, node counts, training step) are carried verbatim.
struct Checkpoint {
  NetworkWeights weights;
  nlohmann::ordered_json metadata;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

void write_checkpoint(std::ostream& out, const Checkpoint& ck);
/// Rejects bad magic, unknown versions, truncation, and tensors that do not
/// match the layout implied by the stored network config.
Checkpoint read_checkpoint(std::istream& in);
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& ck);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace sgdiff

#endif  // SGDIFF_CHECKPOINT_HPP_
