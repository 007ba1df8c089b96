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

#ifndef SGDIFF_GRAPH_HPP_
#define SGDIFF_GRAPH_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace sgdiff {

/// Position of an unordered node pair in the row-major strict upper
/// triangle of the adjacency structure.
using PairIndex = std::int64_t;

struct NodePair {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodePair&, const NodePair&) = default;
};

/// n(n-1)/2.
std::int64_t pair_count(int n);

PairIndex pair_index(int i, int j, int n);
NodePair pair_from_index(PairIndex idx, int n);

/// Class counts and marginal label distributions shared by a dataset.
/// Edge class 0 is "non-existing".
struct GraphSpec {
  int node_classes = 1;
  int edge_classes = 2;
  std::vector<double> node_marginals{1.0};
  std::vector<double> edge_marginals{0.5, 0.5};

  void validate() const;
  /// Marginal-free spec (uniform marginals) for a and b classes.
  static GraphSpec uniform(int node_classes, int edge_classes);
};

/// Undirected graph with categorical node and edge labels, stored as a
/// sorted edge list. Only existing edges (label >= 1) are stored.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Edges must already be canonical (i < j, ascending condensed index,
  /// unique). Throws PreconditionError otherwise.
  SparseGraph(int num_nodes, std::vector<int> node_labels,
              std::vector<NodePair> edges, std::vector<int> edge_labels);

  /// Same contract with edges given as condensed indices.
  static SparseGraph from_pair_indices(int num_nodes,
                                       std::vector<int> node_labels,
                                       std::span<const PairIndex> indices,
                                       std::vector<int> edge_labels);

  int num_nodes() const { return num_nodes_; }
  std::size_t num_edges() const { return edges_.size(); }
  const std::vector<int>& node_labels() const { return node_labels_; }
  const std::vector<NodePair>& edges() const { return edges_; }
  const std::vector<int>& edge_labels() const { return edge_labels_; }

  std::vector<PairIndex> pair_indices() const;

  /// Label of pair (i, j) in either orientation; 0 when absent.
  int edge_label(int i, int j) const;

  /// Checks class ranges against the spec.
  void validate(const GraphSpec& spec) const;

  friend bool operator==(const SparseGraph&, const SparseGraph&) = default;

 private:
  int num_nodes_ = 0;
  std::vector<int> node_labels_;
  std::vector<NodePair> edges_;
  std::vector<int> edge_labels_;
};

struct LabeledEdge {
  int i = 0;
  int j = 0;
  int label = 1;
};

/// Orients, sorts and de-duplicates a raw edge list. Exact duplicates are
/// rejected as well as self-loops; `node_labels` empty means all zeros.
SparseGraph canonicalize(int num_nodes, std::vector<int> node_labels,
                         std::span<const LabeledEdge> raw_edges,
                         const GraphSpec& spec);

/// Full n x n edge-class matrix; used only by test oracles and small
/// diagnostics.
struct DenseGraph {
  int num_nodes = 0;
  std::vector<int> node_labels;
  std::vector<int> edge_classes;  // row-major n*n

  int at(int i, int j) const { return edge_classes[i * num_nodes + j]; }
};

DenseGraph to_dense(const SparseGraph& g);
SparseGraph from_dense(const DenseGraph& dense);

/// Node v of the input becomes node permutation[v] of the output.
SparseGraph permute_nodes(const SparseGraph& g, std::span<const int> permutation);

/// (outer . inner)[v] = outer[inner[v]].
std::vector<int> compose_permutations(std::span<const int> outer,
                                      std::span<const int> inner);

std::vector<int> degrees(const SparseGraph& g);
std::vector<std::vector<int>> adjacency_lists(const SparseGraph& g);

struct GraphBatch {
  std::vector<SparseGraph> graphs;
  std::vector<int> node_offsets;  // size graphs.size() + 1

  int total_nodes() const { return node_offsets.back(); }
};

GraphBatch batch(std::vector<SparseGraph> graphs);
std::vector<SparseGraph> unbatch(const GraphBatch& b);

}  // namespace sgdiff

#endif  // SGDIFF_GRAPH_HPP_
