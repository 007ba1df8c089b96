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

#include "sgdiff/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <algorithm>
#include <numeric>

#include "sgdiff/error.hpp"
#include "sgdiff/query.hpp"

namespace sgdiff {

void adamw_update(TrainState& state, const NetworkWeights& grads, const OptimizerConfig& opt) {
  SGDIFF_REQUIRE(grads.size() == state.weights.size(), "adamw_update: layout mismatch");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(opt.beta1, t);
  const double correction2 = 1.0 - std::pow(opt.beta2, t);
  for (std::size_t k = 0; k < state.weights.size(); ++k) {
    auto& w = state.weights.tensor(k);
    auto& m = state.first_moment.tensor(k);
    auto& v = state.second_moment.tensor(k);
    const auto& g = grads.tensor(k);
    w *= 1.0 - opt.learning_rate * opt.weight_decay;
    m = opt.beta1 * m + (1.0 - opt.beta1) * g;
    v = opt.beta2 * v + (1.0 - opt.beta2) * g.cwiseProduct(g);
    w.array() -= opt.learning_rate * (m.array() / correction1) /
                 ((v.array() / correction2).sqrt() + opt.epsilon);
  }
}

std::vector<TrainingExample> sample_training_examples(std::span<const SparseGraph> graphs,
                                                      const NoiseSchedule& schedule,
                                                      const GraphSpec& spec,
                                                      const NetworkConfig& cfg,
                                                      bool permute, Rng& rng) {
  std::vector<TrainingExample> examples;
  examples.reserve(graphs.size());
  const int steps = schedule.steps();
  for (const auto& original : graphs) {
    SparseGraph clean = original;
    if (permute) {
      std::vector<int> perm(clean.num_nodes());
      std::iota(perm.begin(), perm.end(), 0);
      rng.shuffle(perm);
      clean = permute_nodes(clean, perm);
    }
    const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(steps)));
    const auto noisy = apply_noise(clean, t, schedule, spec, rng);
    const auto queries = sample_query_pairs(clean.num_nodes(), cfg.lambda, rng);
    examples.push_back(make_training_example(clean, noisy, queries,
                                             static_cast<double>(t) / steps, cfg, spec));
  }
  return examples;
}

StepResult train_step(TrainState& state, std::span<const SparseGraph> batch,
                      const NoiseSchedule& schedule, const GraphSpec& spec,
                      const OptimizerConfig& opt, Rng& rng, const TrainStepOptions& options) {
  SGDIFF_REQUIRE(!batch.empty(), "train_step: empty batch");
  const auto examples = sample_training_examples(batch, schedule, spec, state.weights.config(),
                                                 options.permute_nodes, rng);
  const auto result = compute_gradients(state.weights, examples, options.workers);
  adamw_update(state, result.gradients, opt);
  return {result.loss, result.node_term, result.edge_term};
}

std::vector<EpochLog> train_epochs(TrainState& state, std::span<const SparseGraph> data,
                                   const NoiseSchedule& schedule, const GraphSpec& spec,
                                   const OptimizerConfig& opt, int epochs, int batch_size,
                                   Rng& rng, const TrainStepOptions& options,
                                   const std::function<void(const EpochLog&)>& on_epoch) {
  SGDIFF_REQUIRE(!data.empty(), "train_epochs: empty dataset");
  SGDIFF_REQUIRE(batch_size >= 1, "train_epochs: batch size must be positive");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<EpochLog> logs;
  std::vector<SparseGraph> batch;
  for (int e = 1; e <= epochs; ++e) {
    const auto start = std::chrono::steady_clock::now();
    rng.shuffle(order);
    EpochLog log;
    log.epoch = e;
    int batches = 0;
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(batch_size)) {
      batch.clear();
      for (std::size_t k = b; k < std::min(order.size(), b + batch_size); ++k)
        batch.push_back(data[order[k]]);
      const auto r = train_step(state, batch, schedule, spec, opt, rng, options);
      log.loss += r.loss;
      log.node_term += r.node_term;
      log.edge_term += r.edge_term;
      ++batches;
    }
    log.loss /= batches;
    log.node_term /= batches;
    log.edge_term /= batches;
    log.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (on_epoch) on_epoch(log);
    logs.push_back(log);
  }
  return logs;
}

}  // namespace sgdiff
