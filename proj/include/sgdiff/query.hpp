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

#ifndef SGDIFF_QUERY_HPP_
#define SGDIFF_QUERY_HPP_

#include <span>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

/// ceil(lambda * n(n-1)/2), with products that are integral up to rounding
/// error (0.2 * 15) treated as integral.
std::int64_t query_count(int num_nodes, double lambda);

/// Sorted condensed indices of the pairs selected for prediction, one list
/// per graph of a batch.
struct QueryEdgeSet {
  double lambda = 1.0;
  std::vector<std::vector<PairIndex>> per_graph;
};

std::vector<PairIndex> sample_query_pairs(int num_nodes, double lambda, Rng& rng);
QueryEdgeSet sample_query_edges(const GraphBatch& batch, double lambda, Rng& rng);

/// Union of the noisy edges and the query pairs: the edge set the denoiser
/// passes messages over.
struct MessageGraph {
  int num_nodes = 0;
  std::vector<int> node_labels;
  std::vector<NodePair> edges;       // sorted by condensed index
  std::vector<PairIndex> pair_ids;   // condensed index of each edge
  std::vector<int> labels;           // noisy label, 0 for query-only edges
  std::vector<char> is_noisy;
  std::vector<char> is_query;
  /// Positions in `edges` of the query pairs, in ascending pair order.
  std::vector<int> query_positions;

  std::size_t num_edges() const { return edges.size(); }
  std::size_t num_queries() const { return query_positions.size(); }
};

/// `queries` must be sorted, unique and indexed against the noisy graph's
/// node count.
MessageGraph build_message_graph(const SparseGraph& noisy,
                                 std::span<const PairIndex> queries);

}  // namespace sgdiff

#endif  // SGDIFF_QUERY_HPP_
