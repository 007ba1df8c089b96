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

#include "sgdiff/query.hpp"

#include <cmath>

#include "sgdiff/error.hpp"

namespace sgdiff {

std::int64_t query_count(int num_nodes, double lambda) {
  SGDIFF_REQUIRE(lambda > 0 && lambda <= 1, "query sampling: lambda must lie in (0, 1]");
  const std::int64_t pairs = pair_count(num_nodes);
  const double x = lambda * static_cast<double>(pairs);
  const double nearest = std::round(x);
  const double count =
      std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
  return std::min<std::int64_t>(pairs, static_cast<std::int64_t>(count));
}

std::vector<PairIndex> sample_query_pairs(int num_nodes, double lambda, Rng& rng) {
  const std::int64_t count = query_count(num_nodes, lambda);
  return rng.sample_without_replacement(pair_count(num_nodes), count);
}

QueryEdgeSet sample_query_edges(const GraphBatch& batch, double lambda, Rng& rng) {
  QueryEdgeSet q;
  q.lambda = lambda;
  q.per_graph.reserve(batch.graphs.size());
  for (const auto& g : batch.graphs)
    q.per_graph.push_back(sample_query_pairs(g.num_nodes(), lambda, rng));
  return q;
}

MessageGraph build_message_graph(const SparseGraph& noisy,
                                 std::span<const PairIndex> queries) {
  const int n = noisy.num_nodes();
  const std::int64_t total = pair_count(n);
  for (std::size_t k = 0; k < queries.size(); ++k) {
    SGDIFF_REQUIRE(queries[k] >= 0 && queries[k] < total,
                   "build_message_graph: query index out of range");
    SGDIFF_REQUIRE(k == 0 || queries[k] > queries[k - 1],
                   "build_message_graph: queries must be sorted and unique");
  }
  MessageGraph mg;
  mg.num_nodes = n;
  mg.node_labels = noisy.node_labels();
  const auto noisy_ids = noisy.pair_indices();
  const std::size_t cap = noisy_ids.size() + queries.size();
  mg.edges.reserve(cap);
  mg.pair_ids.reserve(cap);
  mg.labels.reserve(cap);
  mg.is_noisy.reserve(cap);
  mg.is_query.reserve(cap);
  mg.query_positions.reserve(queries.size());

  std::size_t a = 0, b = 0;
  while (a < noisy_ids.size() || b < queries.size()) {
    const bool take_noisy =
        a < noisy_ids.size() && (b == queries.size() || noisy_ids[a] <= queries[b]);
    const bool take_query =
        b < queries.size() && (a == noisy_ids.size() || queries[b] <= noisy_ids[a]);
    const PairIndex id = take_noisy ? noisy_ids[a] : queries[b];
    mg.pair_ids.push_back(id);
    mg.edges.push_back(take_noisy ? noisy.edges()[a] : pair_from_index(id, n));
    mg.labels.push_back(take_noisy ? noisy.edge_labels()[a] : 0);
    mg.is_noisy.push_back(take_noisy ? 1 : 0);
    mg.is_query.push_back(take_query ? 1 : 0);
    if (take_query) mg.query_positions.push_back(static_cast<int>(mg.edges.size() - 1));
    if (take_noisy) ++a;
    if (take_query) ++b;
  }
  return mg;
}

}  // namespace sgdiff
