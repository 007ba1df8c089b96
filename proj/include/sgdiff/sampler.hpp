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

#ifndef SGDIFF_SAMPLER_HPP_
#define SGDIFF_SAMPLER_HPP_

#include <cstdint>
#include <functional>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/network.hpp"
#include "sgdiff/noise.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

struct SamplerConfig {
  int diffusion_steps = 1000;  // T
  int inference_steps = 1000;  // S
  double lambda = 1.0;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;
};

/// K = ceil(1/lambda) chunks of equal size s = ceil(N/K). When K does not
/// divide N the last chunk is the trailing s entries of the shuffled pair
/// order and so overlaps the one before it.
struct ChunkPlan {
  std::int64_t chunk_size = 0;
  std::vector<std::vector<PairIndex>> chunks;  // each sorted
};

int chunk_count(double lambda);
ChunkPlan plan_chunks(int num_nodes, double lambda, Rng& rng);

/// Descending timesteps T = t_0 > t_1 > ... > t_S = 0 on the rounded grid
/// round(s T / S).
std::vector<int> stride_ladder(int diffusion_steps, int inference_steps);

struct StepInstrumentation {
  int t = 0;
  std::size_t noisy_edges = 0;
  std::int64_t chunk_size = 0;
  std::size_t peak_message_edges = 0;
  int chunks = 0;
  /// When enabled, decisions[p] counts how often pair p was sampled.
  bool count_decisions = false;
  std::vector<int> decisions;
};

/// One reverse step G^t -> G^{t-k}. All chunks condition on the same G^t;
/// node labels are sampled once, from the first chunk's prediction.
SparseGraph denoise_step(const NetworkWeights& w, const SparseGraph& g_t, int t, int k,
                         double lambda, const NoiseSchedule& schedule, const GraphSpec& spec,
                         Rng& rng, StepInstrumentation* instrumentation = nullptr);

class NodeCountSource {
 public:
  static NodeCountSource fixed(int num_nodes);
  /// Draws uniformly from the observed node counts (with multiplicity).
  static NodeCountSource empirical(std::vector<int> observed);

  int draw(Rng& rng) const;

 private:
  std::vector<int> values_;
};

using StepObserver = std::function<void(int graph, const StepInstrumentation&)>;

/// Graph g uses the stream Rng(cfg.seed).split(g), so output does not depend
/// on the worker count. The observer, if any, is called from worker threads.
std::vector<SparseGraph> generate(const NetworkWeights& w, const NodeCountSource& nodes,
                                  int count, const SamplerConfig& cfg,
                                  const NoiseSchedule& schedule, const GraphSpec& spec,
                                  const StepObserver& observer = {});

}  // namespace sgdiff

#endif  // SGDIFF_SAMPLER_HPP_
