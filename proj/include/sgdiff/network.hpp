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

#ifndef SGDIFF_NETWORK_HPP_
#define SGDIFF_NETWORK_HPP_

#include <Eigen/Dense>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sgdiff/encodings.hpp"
#include "sgdiff/graph.hpp"
#include "sgdiff/query.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

enum class DenoiserMode { kTransformer, kLinkPrediction };

std::string_view to_string(DenoiserMode mode);
DenoiserMode denoiser_mode_from_string(std::string_view name);

struct NetworkConfig {
  int layers = 4;
  int node_dim = 64;   // d_x
  int edge_dim = 32;   // d_e
  int graph_dim = 32;  // d_g
  int heads = 4;
  int node_classes = 1;
  int edge_classes = 2;
  DenoiserMode mode = DenoiserMode::kTransformer;
  double edge_weight = 5.0;  // c
  double lambda = 1.0;       // query fraction used in training
  EncodingConfig encoding;

  void validate() const;

  int node_input_width() const { return node_classes + encoding.node_width(); }
  int edge_input_width() const { return edge_classes + 2 + encoding.pair_width(); }
  int graph_input_width() const {
    return encoding.graph_width(node_classes, edge_classes);
  }
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Named dense parameter tensors in a fixed order.
class NetworkWeights {
 public:
  NetworkWeights() = default;
  explicit NetworkWeights(NetworkConfig config) : config_(std::move(config)) {}

  const NetworkConfig& config() const { return config_; }

  void add(std::string name, Eigen::MatrixXd value);
  std::size_t size() const { return tensors_.size(); }
  const std::string& name(std::size_t k) const { return names_[k]; }
  Eigen::MatrixXd& tensor(std::size_t k) { return tensors_[k]; }
  const Eigen::MatrixXd& tensor(std::size_t k) const { return tensors_[k]; }
  /// Throws PreconditionError on unknown names.
  std::size_t index_of(std::string_view name) const;
  const Eigen::MatrixXd& at(std::string_view name) const { return tensors_[index_of(name)]; }
  Eigen::MatrixXd& at(std::string_view name) { return tensors_[index_of(name)]; }

  std::size_t parameter_count() const;
  /// Zero tensors with the same names and shapes.
  NetworkWeights zeros_like() const;

  friend bool operator==(const NetworkWeights& a, const NetworkWeights& b);

 private:
  NetworkConfig config_;
  std::vector<std::string> names_;
  std::vector<Eigen::MatrixXd> tensors_;
};

/// Linear weights uniform in +-1/sqrt(fan_in), layer-norm scale 1 shift 0.
NetworkWeights init_network(const NetworkConfig& cfg, Rng& rng);

struct TensorShape {
  std::string name;
  int rows = 0;
  int cols = 0;
};

/// Names and shapes of every tensor, in storage order.
std::vector<TensorShape> network_layout(const NetworkConfig& cfg);

/// Per-node and per-query-pair class distributions.
struct Prediction {
  Eigen::MatrixXd node_probs;  // n x a
  Eigen::MatrixXd edge_probs;  // |queries| x b
  std::vector<PairIndex> query_pairs;
};

/// Sparse graph transformer over the message graph. `enc.pair` rows must
/// follow `mg.pair_ids`. Requires transformer mode.
Prediction forward(const NetworkWeights& w, const MessageGraph& mg,
                   const EncodedFeatures& enc, double t_norm);

/// Link-prediction baseline: message passing over the noisy edges only,
/// query logits from MLP(x_i, x_j) + MLP(x_j, x_i). `enc.pair` rows follow
/// the noisy graph's edges. Requires link-prediction mode.
Prediction forward_link_pred(const NetworkWeights& w, const SparseGraph& noisy,
                             std::span<const PairIndex> queries,
                             const EncodedFeatures& enc, double t_norm);

/// Final node states of the link-prediction trunk (for inspection and
/// tests).
Eigen::MatrixXd link_pred_node_states(const NetworkWeights& w, const SparseGraph& noisy,
                                      const EncodedFeatures& enc, double t_norm);

struct LossTerms {
  double total = 0;
  double node_term = 0;
  double edge_term = 0;
  int clamped = 0;  // probabilities floored at 1e-12
};

/// Edge-term weight c / (|queries| / n(n-1)/2).
double edge_term_weight(int num_nodes, std::size_t query_count, double c);

/// sum_i CE(x_i) + edge_term_weight * sum_{queries} CE(y_ij), natural log.
LossTerms query_loss(const Prediction& pred, const SparseGraph& clean, double c);

/// One supervised instance: a noisy message graph plus its clean targets.
struct TrainingExample {
  MessageGraph message_graph;
  SparseGraph noisy;  // link-prediction mode runs on this
  EncodedFeatures encodings;
  double t_norm = 0;
  std::vector<int> node_targets;
  std::vector<int> edge_targets;  // clean class of each query pair
  double edge_weight = 0;
};

TrainingExample make_training_example(const SparseGraph& clean, const SparseGraph& noisy,
                                      std::span<const PairIndex> queries, double t_norm,
                                      const NetworkConfig& cfg, const GraphSpec& spec);

struct GradientResult {
  double loss = 0;  // mean over examples
  double node_term = 0;
  double edge_term = 0;
  NetworkWeights gradients;
};

/// Exact reverse-mode gradients of the mean example loss. With workers > 1
/// examples are split across threads; the reduction order is fixed so the
/// result does not depend on the worker count.
GradientResult compute_gradients(const NetworkWeights& w,
                                 std::span<const TrainingExample> examples,
                                 int workers = 1);

/// Loss of the examples without gradients.
double evaluate_loss(const NetworkWeights& w, std::span<const TrainingExample> examples);

}  // namespace sgdiff

#endif  // SGDIFF_NETWORK_HPP_
