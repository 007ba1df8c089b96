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

#include "sgdiff/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <unordered_map>

#include "sgdiff/encodings.hpp"
#include "sgdiff/error.hpp"
#include "sgdiff/query.hpp"

namespace sgdiff {

void SamplerConfig::validate() const {
  SGDIFF_REQUIRE(diffusion_steps >= 1, "sampler: diffusion_steps must be at least 1");
  SGDIFF_REQUIRE(inference_steps >= 1 && inference_steps <= diffusion_steps,
                 "sampler: inference_steps must lie in [1, diffusion_steps]");
  SGDIFF_REQUIRE(lambda > 0 && lambda <= 1, "sampler: lambda must lie in (0, 1]");
  SGDIFF_REQUIRE(workers >= 1, "sampler: workers must be at least 1");
}

int chunk_count(double lambda) {
  SGDIFF_REQUIRE(lambda > 0 && lambda <= 1, "plan_chunks: lambda must lie in (0, 1]");
  const double x = 1.0 / lambda;
  const double nearest = std::round(x);
  return static_cast<int>(std::abs(x - nearest) <= 1e-9 * x ? nearest : std::ceil(x));
}

ChunkPlan plan_chunks(int num_nodes, double lambda, Rng& rng) {
  SGDIFF_REQUIRE(num_nodes >= 2, "plan_chunks: need at least two nodes");
  const std::int64_t total = pair_count(num_nodes);
  const std::int64_t k = std::min<std::int64_t>(chunk_count(lambda), total);
  const std::int64_t size = (total + k - 1) / k;
  // With large K, (K-1) s can exceed N; only ceil(N/s) chunks are needed
  // to cover every pair.
  const std::int64_t used = (total + size - 1) / size;

  std::vector<PairIndex> order(static_cast<std::size_t>(total));
  std::iota(order.begin(), order.end(), PairIndex{0});
  rng.shuffle(order);

  ChunkPlan plan;
  plan.chunk_size = size;
  for (std::int64_t c = 0; c < used; ++c) {
    const std::int64_t begin = c + 1 == used ? total - size : c * size;
    std::vector<PairIndex> chunk(order.begin() + begin, order.begin() + begin + size);
    std::sort(chunk.begin(), chunk.end());
    plan.chunks.push_back(std::move(chunk));
  }
  return plan;
}

std::vector<int> stride_ladder(int diffusion_steps, int inference_steps) {
  SGDIFF_REQUIRE(inference_steps >= 1 && inference_steps <= diffusion_steps,
                 "stride_ladder: need 1 <= S <= T");
  std::vector<int> ladder;
  for (int s = inference_steps; s >= 0; --s) {
    const auto t = static_cast<int>(std::llround(static_cast<double>(s) * diffusion_steps /
                                                 inference_steps));
    if (ladder.empty() || t < ladder.back()) ladder.push_back(t);
  }
  return ladder;
}

namespace {

Prediction predict_chunk(const NetworkWeights& w, const SparseGraph& g_t,
                         std::span<const PairIndex> chunk, GraphEncoder& encoder,
                         const EncodedFeatures& noisy_enc, double t_norm,
                         std::size_t& message_edges) {
  if (w.config().mode == DenoiserMode::kLinkPrediction) {
    message_edges = g_t.num_edges() + chunk.size();
    return forward_link_pred(w, g_t, chunk, noisy_enc, t_norm);
  }
  const auto mg = build_message_graph(g_t, chunk);
  message_edges = mg.num_edges();
  auto enc = encoder.encode(mg.pair_ids);
  enc.set_timestep(t_norm);
  return forward(w, mg, enc, t_norm);
}

}  // namespace

SparseGraph denoise_step(const NetworkWeights& w, const SparseGraph& g_t, int t, int k,
                         double lambda, const NoiseSchedule& schedule, const GraphSpec& spec,
                         Rng& rng, StepInstrumentation* instrumentation) {
  SGDIFF_REQUIRE(k >= 1 && k <= t && t <= schedule.steps(),
                 "denoise_step: need 1 <= k <= t <= T");
  const int n = g_t.num_nodes();
  const auto& cfg = w.config();
  SGDIFF_REQUIRE(cfg.node_classes == spec.node_classes && cfg.edge_classes == spec.edge_classes,
                 "denoise_step: network and graph spec disagree on class counts");
  const PosteriorKernel node_kernel(schedule, t, k, spec.node_marginals);
  const PosteriorKernel edge_kernel(schedule, t, k, spec.edge_marginals);
  const double t_norm = static_cast<double>(t) / schedule.steps();

  std::vector<int> node_labels = g_t.node_labels();
  std::vector<double> row;

  if (n < 2) {
    // No pairs to query; the network still predicts the node.
    GraphEncoder encoder(g_t, cfg.encoding, spec);
    auto enc = encoder.encode({});
    enc.set_timestep(t_norm);
    const auto pred = cfg.mode == DenoiserMode::kLinkPrediction
                          ? forward_link_pred(w, g_t, {}, enc, t_norm)
                          : forward(w, build_message_graph(g_t, {}), enc, t_norm);
    for (int v = 0; v < n; ++v) {
      Eigen::RowVectorXd r = pred.node_probs.row(v);
      row.assign(r.data(), r.data() + r.size());
      node_labels[v] = rng.categorical(node_kernel.distribution(node_labels[v], row));
    }
    return SparseGraph(n, std::move(node_labels), {}, {});
  }

  const auto plan = plan_chunks(n, lambda, rng);
  GraphEncoder encoder(g_t, cfg.encoding, spec);
  EncodedFeatures noisy_enc;
  if (cfg.mode == DenoiserMode::kLinkPrediction) {
    noisy_enc = encoder.encode(g_t.pair_indices());
    noisy_enc.set_timestep(t_norm);
  }
  if (instrumentation) {
    instrumentation->t = t;
    instrumentation->noisy_edges = g_t.num_edges();
    instrumentation->chunk_size = plan.chunk_size;
    instrumentation->chunks = static_cast<int>(plan.chunks.size());
    instrumentation->peak_message_edges = 0;
    if (instrumentation->count_decisions)
      instrumentation->decisions.assign(static_cast<std::size_t>(pair_count(n)), 0);
  }

  // Last decision wins for pairs in the overlap of the final two chunks.
  std::unordered_map<PairIndex, int> decided;
  for (std::size_t c = 0; c < plan.chunks.size(); ++c) {
    const auto& chunk = plan.chunks[c];
    std::size_t message_edges = 0;
    Prediction pred;
    try {
      pred = predict_chunk(w, g_t, chunk, encoder, noisy_enc, t_norm, message_edges);
    } catch (const NumericalError& e) {
      throw NumericalError("denoise_step t=" + std::to_string(t) + " chunk " +
                           std::to_string(c) + ": " + e.what());
    }
    if (!pred.node_probs.allFinite() || !pred.edge_probs.allFinite())
      throw NumericalError("denoise_step t=" + std::to_string(t) + " chunk " +
                           std::to_string(c) + ": non-finite prediction");
    if (instrumentation)
      instrumentation->peak_message_edges =
          std::max(instrumentation->peak_message_edges, message_edges);

    if (c == 0) {
      for (int v = 0; v < n; ++v) {
        Eigen::RowVectorXd r = pred.node_probs.row(v);
        row.assign(r.data(), r.data() + r.size());
        node_labels[v] = rng.categorical(node_kernel.distribution(g_t.node_labels()[v], row));
      }
    }
    for (std::size_t q = 0; q < chunk.size(); ++q) {
      const PairIndex id = chunk[q];
      const auto [i, j] = pair_from_index(id, n);
      Eigen::RowVectorXd r = pred.edge_probs.row(static_cast<Eigen::Index>(q));
      row.assign(r.data(), r.data() + r.size());
      const int label = rng.categorical(edge_kernel.distribution(g_t.edge_label(i, j), row));
      if (label == 0)
        decided.erase(id);
      else
        decided[id] = label;
      if (instrumentation && instrumentation->count_decisions)
        ++instrumentation->decisions[static_cast<std::size_t>(id)];
    }
  }

  std::vector<std::pair<PairIndex, int>> kept(decided.begin(), decided.end());
  std::sort(kept.begin(), kept.end());
  std::vector<PairIndex> ids;
  std::vector<int> labels;
  ids.reserve(kept.size());
  labels.reserve(kept.size());
  for (const auto& [id, label] : kept) {
    ids.push_back(id);
    labels.push_back(label);
  }
  return SparseGraph::from_pair_indices(n, std::move(node_labels), ids, std::move(labels));
}

NodeCountSource NodeCountSource::fixed(int num_nodes) {
  SGDIFF_REQUIRE(num_nodes >= 1, "NodeCountSource: node count must be positive");
  NodeCountSource s;
  s.values_ = {num_nodes};
  return s;
}

NodeCountSource NodeCountSource::empirical(std::vector<int> observed) {
  SGDIFF_REQUIRE(!observed.empty(), "NodeCountSource: no observed node counts");
  for (int v : observed) SGDIFF_REQUIRE(v >= 1, "NodeCountSource: node count must be positive");
  NodeCountSource s;
  s.values_ = std::move(observed);
  return s;
}

int NodeCountSource::draw(Rng& rng) const {
  if (values_.size() == 1) return values_[0];
  return values_[static_cast<std::size_t>(rng.below(values_.size()))];
}

std::vector<SparseGraph> generate(const NetworkWeights& w, const NodeCountSource& nodes,
                                  int count, const SamplerConfig& cfg,
                                  const NoiseSchedule& schedule, const GraphSpec& spec,
                                  const StepObserver& observer) {
  cfg.validate();
  SGDIFF_REQUIRE(count >= 0, "generate: negative graph count");
  SGDIFF_REQUIRE(schedule.steps() == cfg.diffusion_steps,
                 "generate: schedule length differs from diffusion_steps");
  const auto ladder = stride_ladder(cfg.diffusion_steps, cfg.inference_steps);
  const Rng root(cfg.seed);
  std::vector<SparseGraph> out(static_cast<std::size_t>(count));

  auto run_one = [&](int g) {
    Rng rng = root.split(static_cast<std::uint64_t>(g));
    const int n = nodes.draw(rng);
    SparseGraph current = prior_sample(n, spec, rng);
    StepInstrumentation info;
    for (std::size_t s = 0; s + 1 < ladder.size(); ++s) {
      const int t = ladder[s];
      const int k = t - ladder[s + 1];
      current = denoise_step(w, current, t, k, cfg.lambda, schedule, spec, rng,
                             observer ? &info : nullptr);
      if (observer) observer(g, info);
    }
    out[static_cast<std::size_t>(g)] = std::move(current);
  };

  const int threads = std::max(1, std::min(cfg.workers, count));
  if (threads == 1) {
    for (int g = 0; g < count; ++g) run_one(g);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  for (int th = 0; th < threads; ++th) {
    pool.emplace_back([&, th] {
      try {
        for (int g = th; g < count; g += threads) run_one(g);
      } catch (...) {
        errors[static_cast<std::size_t>(th)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace sgdiff
