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

#ifndef SGDIFF_TRAINING_HPP_
#define SGDIFF_TRAINING_HPP_

#include <functional>
#include <span>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/network.hpp"
#include "sgdiff/noise.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

struct OptimizerConfig {
  double learning_rate = 2e-4;
  double weight_decay = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Weights plus the adaptive-moment buffers.
struct TrainState {
  NetworkWeights weights;
  NetworkWeights first_moment;
  NetworkWeights second_moment;
  std::int64_t step = 0;

  explicit TrainState(NetworkWeights w)
      : weights(std::move(w)),
        first_moment(weights.zeros_like()),
        second_moment(weights.zeros_like()) {}
};

/// Decoupled weight decay followed by a bias-corrected Adam update.
void adamw_update(TrainState& state, const NetworkWeights& grads, const OptimizerConfig& opt);

struct TrainStepOptions {
  bool permute_nodes = true;
  int workers = 1;
};

struct StepResult {
  double loss = 0;
  double node_term = 0;
  double edge_term = 0;
};

/// Builds one training example per clean graph: optional node permutation,
/// t ~ U{1..T}, G^t ~ q(G^t | G), query pairs at the config's lambda.
std::vector<TrainingExample> sample_training_examples(std::span<const SparseGraph> graphs,
                                                      const NoiseSchedule& schedule,
                                                      const GraphSpec& spec,
                                                      const NetworkConfig& cfg,
                                                      bool permute, Rng& rng);

/// One optimizer step on a batch of clean graphs.
StepResult train_step(TrainState& state, std::span<const SparseGraph> batch,
                      const NoiseSchedule& schedule, const GraphSpec& spec,
                      const OptimizerConfig& opt, Rng& rng,
                      const TrainStepOptions& options = {});

struct EpochLog {
  int epoch = 0;  // 1-based
  double loss = 0;
  double node_term = 0;
  double edge_term = 0;
  double seconds = 0;
};

/// Shuffled mini-batches; the last batch of an epoch may be short. The
/// epoch values are means over its batches.
std::vector<EpochLog> train_epochs(TrainState& state, std::span<const SparseGraph> data,
                                   const NoiseSchedule& schedule, const GraphSpec& spec,
                                   const OptimizerConfig& opt, int epochs, int batch_size,
                                   Rng& rng, const TrainStepOptions& options = {},
                                   const std::function<void(const EpochLog&)>& on_epoch = {});

}  // namespace sgdiff

#endif  // SGDIFF_TRAINING_HPP_
