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

#ifndef SGDIFF_ENCODINGS_HPP_
#define SGDIFF_ENCODINGS_HPP_

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sgdiff/graph.hpp"

namespace sgdiff {

struct EncodingConfig {
  int k_eig = 8;
  int hop_cap = 10;
  bool eigen = true;
  bool cycles = true;
  bool degree = true;
  bool distance = true;
  bool adamic_adar = true;
  bool class_frequencies = true;

  void validate() const;

  // Widths are fixed by the config; disabled families are zero-filled.
  int node_width() const { return k_eig + 1; }
  int pair_width() const { return hop_cap + 2; }
  int graph_width(int node_classes, int edge_classes) const {
    return k_eig + 3 + 2 + node_classes + edge_classes + 1;
  }
  friend bool operator==(const EncodingConfig&, const EncodingConfig&) = default;
};

/// Structural features for one graph. Rows of `pair` follow the requested
/// pair list. The last column of `graph` is the timestep slot.
struct EncodedFeatures {
  Eigen::MatrixXd node;   // n x node_width
  Eigen::MatrixXd pair;   // |pairs| x pair_width
  Eigen::RowVectorXd graph;

  void set_timestep(double t_norm) { graph(graph.size() - 1) = t_norm; }
};

/// Node and graph features are computed once at construction; pair
/// features on demand, with BFS results cached per source node.
class GraphEncoder {
 public:
  GraphEncoder(const SparseGraph& g, const EncodingConfig& cfg, const GraphSpec& spec);

  Eigen::MatrixXd pair_features(std::span<const PairIndex> pairs);
  EncodedFeatures encode(std::span<const PairIndex> pairs);

  const Eigen::MatrixXd& node_features() const { return node_; }
  const Eigen::RowVectorXd& graph_features() const { return graph_; }

 private:
  int num_nodes_;
  EncodingConfig cfg_;
  std::vector<std::vector<int>> adj_;
  std::vector<std::vector<int>> bfs_cache_;
  Eigen::MatrixXd node_;
  Eigen::RowVectorXd graph_;
};

EncodedFeatures compute_encodings(const SparseGraph& g, std::span<const PairIndex> pairs,
                                  const EncodingConfig& cfg, const GraphSpec& spec);

struct SpectralDecomposition {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, sign-normalized
};

/// Eigen-decomposition of I - D^{-1/2} A D^{-1/2}; isolated nodes use
/// D^{-1/2} = 0. Each eigenvector is flipped so its largest-magnitude entry
/// is positive.
SpectralDecomposition normalized_laplacian_spectrum(const SparseGraph& g);

struct CycleCounts {
  double c3 = 0;
  double c4 = 0;
  double c5 = 0;
};

/// Simple cycles of length 3, 4 and 5 via closed-walk trace identities.
CycleCounts cycle_counts(const SparseGraph& g);

/// BFS hop distances from `source`, -1 beyond `cap` or unreachable.
std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source,
                               int cap);

double adamic_adar(const std::vector<std::vector<int>>& adj, int i, int j);

}  // namespace sgdiff

#endif  // SGDIFF_ENCODINGS_HPP_
