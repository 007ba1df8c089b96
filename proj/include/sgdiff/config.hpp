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

#ifndef SGDIFF_CONFIG_HPP_
#define SGDIFF_CONFIG_HPP_

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "sgdiff/datasets.hpp"
#include "sgdiff/metrics.hpp"
#include "sgdiff/network.hpp"
#include "sgdiff/training.hpp"

namespace sgdiff {

using Json = nlohmann::ordered_json;

Json to_json(const EncodingConfig& c);
EncodingConfig encoding_config_from_json(const Json& j);
Json to_json(const NetworkConfig& c);
NetworkConfig network_config_from_json(const Json& j);
Json to_json(const GraphSpec& s);
GraphSpec graph_spec_from_json(const Json& j);

struct DataConfig {
  std::string path;     // dataset file; empty means generate from `profile`
  std::string profile = "er";
  int count = 200;
  int n_min = 16;
  int n_max = 16;
  double p = 0.15;  // er
  SbmParams sbm;
};

struct TrainingConfig {
  int batch_size = 16;
  int epochs = 10;
  bool permute_nodes = true;
  int checkpoint_every = 0;  // epochs; 0 = final checkpoint only
};

struct SamplingConfig {
  int steps = 0;  // S; 0 = diffusion steps
  int count = 64;
  int n_nodes = 0;  // 0 = training node-count distribution
};

struct EvalConfig {
  EvalSigmas sigmas;
  int repeats = 1;
};

struct RunConfig {
  DataConfig data;
  int diffusion_steps = 1000;
  std::string schedule = "cosine";
  double lambda = 0;  // 0 = the dataset profile's value (1.0 without one)
  NetworkConfig network;
  OptimizerConfig optimizer;
  TrainingConfig training;
  SamplingConfig sampling;
  EvalConfig eval;
  std::uint64_t seed = 0;
  std::string out = "out";
  int workers = 1;

  /// Lambda after applying the profile default.
  double effective_lambda() const;
  /// Throws PreconditionError on the first invalid field.
  void validate() const;
};

Json to_json(const RunConfig& c);
/// Unknown keys and mistyped values are rejected with the offending path.
RunConfig run_config_from_json(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);

/// 64-bit FNV-1a of the compact JSON text.
std::uint64_t config_hash(const Json& j);
std::string hash_hex(std::uint64_t h);

}  // namespace sgdiff

#endif  // SGDIFF_CONFIG_HPP_
