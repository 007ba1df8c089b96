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

#include "sgdiff/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sgdiff/error.hpp"

namespace sgdiff {

std::int64_t pair_count(int n) {
  const std::int64_t nn = n;
  return nn * (nn - 1) / 2;
}

PairIndex pair_index(int i, int j, int n) {
  SGDIFF_REQUIRE(0 <= i && i < j && j < n,
                 "pair_index: require 0 <= i < j < n, got (" +
                     std::to_string(i) + ", " + std::to_string(j) +
                     ", n=" + std::to_string(n) + ")");
  const std::int64_t ii = i, nn = n;
  return ii * nn - ii * (ii + 1) / 2 + (j - ii - 1);
}

NodePair pair_from_index(PairIndex idx, int n) {
  SGDIFF_REQUIRE(idx >= 0 && idx < pair_count(n),
                 "pair_from_index: index " + std::to_string(idx) +
                     " out of range for n=" + std::to_string(n));
  // Row i starts at i*n - i(i+1)/2. Solve the quadratic, then fix rounding.
  const double nn = n;
  const double disc = (2 * nn - 1) * (2 * nn - 1) - 8.0 * static_cast<double>(idx);
  auto i = static_cast<std::int64_t>(std::floor(((2 * nn - 1) - std::sqrt(disc)) / 2));
  i = std::clamp<std::int64_t>(i, 0, n - 2);
  auto row_start = [n](std::int64_t r) { return r * n - r * (r + 1) / 2; };
  while (i > 0 && row_start(i) > idx) --i;
  while (i + 1 <= n - 2 && row_start(i + 1) <= idx) ++i;
  const std::int64_t j = idx - row_start(i) + i + 1;
  return {static_cast<int>(i), static_cast<int>(j)};
}

void GraphSpec::validate() const {
  SGDIFF_REQUIRE(node_classes >= 1, "GraphSpec: need at least one node class");
  SGDIFF_REQUIRE(edge_classes >= 2,
                 "GraphSpec: need at least two edge classes (0 = non-existing)");
  auto check = [](const std::vector<double>& p, int size, const char* what) {
    SGDIFF_REQUIRE(static_cast<int>(p.size()) == size,
                   std::string("GraphSpec: ") + what + " has wrong length");
    double total = 0;
    for (double v : p) {
      SGDIFF_REQUIRE(v >= 0 && std::isfinite(v),
                     std::string("GraphSpec: ") + what + " has a negative entry");
      total += v;
    }
    SGDIFF_REQUIRE(std::abs(total - 1.0) <= 1e-12,
                   std::string("GraphSpec: ") + what + " does not sum to 1");
  };
  check(node_marginals, node_classes, "node marginals");
  check(edge_marginals, edge_classes, "edge marginals");
}

GraphSpec GraphSpec::uniform(int node_classes, int edge_classes) {
  GraphSpec s;
  s.node_classes = node_classes;
  s.edge_classes = edge_classes;
  s.node_marginals.assign(node_classes, 1.0 / node_classes);
  s.edge_marginals.assign(edge_classes, 1.0 / edge_classes);
  return s;
}

SparseGraph::SparseGraph(int num_nodes, std::vector<int> node_labels,
                         std::vector<NodePair> edges,
                         std::vector<int> edge_labels)
    : num_nodes_(num_nodes),
      node_labels_(std::move(node_labels)),
      edges_(std::move(edges)),
      edge_labels_(std::move(edge_labels)) {
  SGDIFF_REQUIRE(num_nodes_ >= 1, "SparseGraph: need at least one node");
  SGDIFF_REQUIRE(static_cast<int>(node_labels_.size()) == num_nodes_,
                 "SparseGraph: node label count differs from node count");
  SGDIFF_REQUIRE(edges_.size() == edge_labels_.size(),
                 "SparseGraph: edge and edge-label counts differ");
  for (int x : node_labels_)
    SGDIFF_REQUIRE(x >= 0, "SparseGraph: negative node label");
  PairIndex prev = -1;
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto [i, j] = edges_[e];
    SGDIFF_REQUIRE(i != j, "SparseGraph: self-loop");
    const PairIndex idx = pair_index(i, j, num_nodes_);
    SGDIFF_REQUIRE(idx > prev, "SparseGraph: edges not sorted or duplicated");
    prev = idx;
    SGDIFF_REQUIRE(edge_labels_[e] >= 1,
                   "SparseGraph: stored edge with class 0 (non-existing)");
  }
}

SparseGraph SparseGraph::from_pair_indices(int num_nodes,
                                           std::vector<int> node_labels,
                                           std::span<const PairIndex> indices,
                                           std::vector<int> edge_labels) {
  std::vector<NodePair> edges;
  edges.reserve(indices.size());
  for (PairIndex idx : indices) edges.push_back(pair_from_index(idx, num_nodes));
  return SparseGraph(num_nodes, std::move(node_labels), std::move(edges),
                     std::move(edge_labels));
}

std::vector<PairIndex> SparseGraph::pair_indices() const {
  std::vector<PairIndex> out;
  out.reserve(edges_.size());
  for (const auto& [i, j] : edges_) out.push_back(pair_index(i, j, num_nodes_));
  return out;
}

int SparseGraph::edge_label(int i, int j) const {
  if (i == j) return 0;
  if (i > j) std::swap(i, j);
  const PairIndex key = pair_index(i, j, num_nodes_);
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), key, [this](const NodePair& p, PairIndex k) {
        return pair_index(p.i, p.j, num_nodes_) < k;
      });
  if (it == edges_.end() || !(*it == NodePair{i, j})) return 0;
  return edge_labels_[static_cast<std::size_t>(it - edges_.begin())];
}

void SparseGraph::validate(const GraphSpec& spec) const {
  for (int x : node_labels_)
    SGDIFF_REQUIRE(x < spec.node_classes, "SparseGraph: node label out of range");
  for (int y : edge_labels_)
    SGDIFF_REQUIRE(y < spec.edge_classes, "SparseGraph: edge label out of range");
}

SparseGraph canonicalize(int num_nodes, std::vector<int> node_labels,
                         std::span<const LabeledEdge> raw_edges,
                         const GraphSpec& spec) {
  SGDIFF_REQUIRE(num_nodes >= 1, "canonicalize: need at least one node");
  if (node_labels.empty()) node_labels.assign(num_nodes, 0);
  std::vector<std::pair<PairIndex, int>> keyed;
  keyed.reserve(raw_edges.size());
  for (const auto& e : raw_edges) {
    SGDIFF_REQUIRE(e.i != e.j, "canonicalize: self-loop on node " + std::to_string(e.i));
    SGDIFF_REQUIRE(e.i >= 0 && e.j >= 0 && e.i < num_nodes && e.j < num_nodes,
                   "canonicalize: node index out of range");
    SGDIFF_REQUIRE(e.label >= 1 && e.label < spec.edge_classes,
                   "canonicalize: edge label out of range");
    keyed.emplace_back(pair_index(std::min(e.i, e.j), std::max(e.i, e.j), num_nodes),
                       e.label);
  }
  std::sort(keyed.begin(), keyed.end());
  for (std::size_t k = 1; k < keyed.size(); ++k) {
    if (keyed[k].first == keyed[k - 1].first) {
      const auto p = pair_from_index(keyed[k].first, num_nodes);
      throw PreconditionError("canonicalize: duplicate pair (" + std::to_string(p.i) +
                              ", " + std::to_string(p.j) + ")");
    }
  }
  std::vector<PairIndex> idx;
  std::vector<int> labels;
  for (const auto& [k, y] : keyed) {
    idx.push_back(k);
    labels.push_back(y);
  }
  SparseGraph g = SparseGraph::from_pair_indices(num_nodes, std::move(node_labels),
                                                 idx, std::move(labels));
  g.validate(spec);
  return g;
}

DenseGraph to_dense(const SparseGraph& g) {
  DenseGraph d;
  d.num_nodes = g.num_nodes();
  d.node_labels = g.node_labels();
  d.edge_classes.assign(static_cast<std::size_t>(d.num_nodes) * d.num_nodes, 0);
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    const auto [i, j] = g.edges()[e];
    d.edge_classes[i * d.num_nodes + j] = g.edge_labels()[e];
    d.edge_classes[j * d.num_nodes + i] = g.edge_labels()[e];
  }
  return d;
}

SparseGraph from_dense(const DenseGraph& d) {
  const int n = d.num_nodes;
  SGDIFF_REQUIRE(static_cast<int>(d.edge_classes.size()) == n * n,
                 "from_dense: matrix size mismatch");
  std::vector<NodePair> edges;
  std::vector<int> labels;
  for (int i = 0; i < n; ++i) {
    SGDIFF_REQUIRE(d.at(i, i) == 0, "from_dense: nonzero diagonal");
    for (int j = i + 1; j < n; ++j) {
      SGDIFF_REQUIRE(d.at(i, j) == d.at(j, i), "from_dense: matrix not symmetric");
      if (d.at(i, j) != 0) {
        edges.push_back({i, j});
        labels.push_back(d.at(i, j));
      }
    }
  }
  return SparseGraph(n, d.node_labels, std::move(edges), std::move(labels));
}

namespace {

void require_permutation(std::span<const int> perm, int n) {
  SGDIFF_REQUIRE(static_cast<int>(perm.size()) == n,
                 "permutation length differs from node count");
  std::vector<char> seen(n, 0);
  for (int v : perm) {
    SGDIFF_REQUIRE(v >= 0 && v < n && !seen[v], "permutation is not a bijection");
    seen[v] = 1;
  }
}

}  // namespace

SparseGraph permute_nodes(const SparseGraph& g, std::span<const int> permutation) {
  const int n = g.num_nodes();
  require_permutation(permutation, n);
  std::vector<int> labels(n);
  for (int v = 0; v < n; ++v) labels[permutation[v]] = g.node_labels()[v];
  std::vector<std::pair<PairIndex, int>> keyed;
  keyed.reserve(g.num_edges());
  for (std::size_t e = 0; e < g.num_edges(); ++e) {
    int a = permutation[g.edges()[e].i];
    int b = permutation[g.edges()[e].j];
    if (a > b) std::swap(a, b);
    keyed.emplace_back(pair_index(a, b, n), g.edge_labels()[e]);
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<PairIndex> idx;
  std::vector<int> edge_labels;
  for (const auto& [k, y] : keyed) {
    idx.push_back(k);
    edge_labels.push_back(y);
  }
  return SparseGraph::from_pair_indices(n, std::move(labels), idx,
                                        std::move(edge_labels));
}

std::vector<int> compose_permutations(std::span<const int> outer,
                                      std::span<const int> inner) {
  SGDIFF_REQUIRE(outer.size() == inner.size(), "compose_permutations: size mismatch");
  std::vector<int> out(inner.size());
  for (std::size_t v = 0; v < inner.size(); ++v) out[v] = outer[inner[v]];
  return out;
}

std::vector<int> degrees(const SparseGraph& g) {
  std::vector<int> d(g.num_nodes(), 0);
  for (const auto& [i, j] : g.edges()) {
    ++d[i];
    ++d[j];
  }
  return d;
}

std::vector<std::vector<int>> adjacency_lists(const SparseGraph& g) {
  std::vector<std::vector<int>> adj(g.num_nodes());
  for (const auto& [i, j] : g.edges()) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  for (auto& row : adj) std::sort(row.begin(), row.end());
  return adj;
}

GraphBatch batch(std::vector<SparseGraph> graphs) {
  SGDIFF_REQUIRE(!graphs.empty(), "batch: empty graph sequence");
  GraphBatch b;
  b.node_offsets.reserve(graphs.size() + 1);
  b.node_offsets.push_back(0);
  for (const auto& g : graphs) b.node_offsets.push_back(b.node_offsets.back() + g.num_nodes());
  b.graphs = std::move(graphs);
  return b;
}

std::vector<SparseGraph> unbatch(const GraphBatch& b) { return b.graphs; }

}  // namespace sgdiff
