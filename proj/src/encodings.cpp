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

#include "sgdiff/encodings.hpp"

#include <cmath>
#include <deque>
#include <string>

#include "sgdiff/error.hpp"

namespace sgdiff {

namespace {

constexpr double kZeroEigenvalue = 1e-8;

Eigen::MatrixXd dense_adjacency(const SparseGraph& g) {
  const int n = g.num_nodes();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [i, j] : g.edges()) {
    a(i, j) = 1;
    a(j, i) = 1;
  }
  return a;
}

}  // namespace

void EncodingConfig::validate() const {
  SGDIFF_REQUIRE(k_eig >= 0, "EncodingConfig: k_eig must be nonnegative");
  SGDIFF_REQUIRE(hop_cap >= 1, "EncodingConfig: hop_cap must be at least 1");
}

SpectralDecomposition normalized_laplacian_spectrum(const SparseGraph& g) {
  const int n = g.num_nodes();
  const auto deg = degrees(g);
  Eigen::VectorXd inv_sqrt(n);
  for (int v = 0; v < n; ++v) inv_sqrt(v) = deg[v] > 0 ? 1.0 / std::sqrt(deg[v]) : 0.0;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : g.edges()) {
    const double w = inv_sqrt(i) * inv_sqrt(j);
    lap(i, j) -= w;
    lap(j, i) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  if (solver.info() != Eigen::Success)
    throw NumericalError("normalized Laplacian eigen-solver did not converge (n=" +
                         std::to_string(n) + ", m=" + std::to_string(g.num_edges()) + ")");
  SpectralDecomposition out{solver.eigenvalues(), solver.eigenvectors()};
  for (int c = 0; c < n; ++c) {
    Eigen::Index arg = 0;
    out.vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.vectors(arg, c) < 0) out.vectors.col(c) *= -1;
  }
  return out;
}

CycleCounts cycle_counts(const SparseGraph& g) {
  const Eigen::MatrixXd a = dense_adjacency(g);
  const Eigen::MatrixXd a2 = a * a;
  const Eigen::MatrixXd a3 = a2 * a;
  const Eigen::VectorXd d = a.rowwise().sum();
  const double m = static_cast<double>(g.num_edges());
  const double tr3 = a3.trace();
  const double tr4 = a2.cwiseProduct(a2).sum();  // tr(A^2 A^2)
  const double tr5 = a2.cwiseProduct(a3).sum();  // tr(A^2 A^3)

  CycleCounts c;
  c.c3 = tr3 / 6.0;
  // Closed 4-walks that are not 4-cycles backtrack along one or two edges.
  c.c4 = (tr4 - 2.0 * d.squaredNorm() + 2.0 * m) / 8.0;
  // Closed 5-walks that are not 5-cycles run around a triangle once and
  // backtrack along one edge at some vertex of it.
  double triangle_detours = 0;
  for (Eigen::Index v = 0; v < a.rows(); ++v) triangle_detours += (d(v) - 2.0) * a3(v, v);
  c.c5 = (tr5 - 5.0 * tr3 - 5.0 * triangle_detours) / 10.0;
  return c;
}

std::vector<int> bfs_distances(const std::vector<std::vector<int>>& adj, int source,
                               int cap) {
  std::vector<int> dist(adj.size(), -1);
  std::deque<int> frontier{source};
  dist[source] = 0;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop_front();
    if (dist[u] == cap) continue;
    for (int w : adj[u]) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        frontier.push_back(w);
      }
    }
  }
  return dist;
}

double adamic_adar(const std::vector<std::vector<int>>& adj, int i, int j) {
  // Neighbor lists are sorted; walk both.
  double score = 0;
  auto a = adj[i].begin(), b = adj[j].begin();
  while (a != adj[i].end() && b != adj[j].end()) {
    if (*a < *b) {
      ++a;
    } else if (*b < *a) {
      ++b;
    } else {
      const auto d = adj[*a].size();
      if (d >= 2) score += 1.0 / std::log(static_cast<double>(d));
      ++a;
      ++b;
    }
  }
  return score;
}

GraphEncoder::GraphEncoder(const SparseGraph& g, const EncodingConfig& cfg,
                           const GraphSpec& spec)
    : num_nodes_(g.num_nodes()), cfg_(cfg), adj_(adjacency_lists(g)) {
  cfg.validate();
  const int n = num_nodes_;
  const auto deg = degrees(g);
  bfs_cache_.resize(n);
  node_ = Eigen::MatrixXd::Zero(n, cfg.node_width());
  graph_ = Eigen::RowVectorXd::Zero(cfg.graph_width(spec.node_classes, spec.edge_classes));

  if (cfg.eigen && cfg.k_eig > 0) {
    const auto spectrum = normalized_laplacian_spectrum(g);
    int taken = 0;
    for (int c = 0; c < n && taken < cfg.k_eig; ++c) {
      if (spectrum.values(c) <= kZeroEigenvalue) continue;
      node_.col(taken) = spectrum.vectors.col(c);
      graph_(taken) = spectrum.values(c);
      ++taken;
    }
  }
  int col = cfg.k_eig;
  if (cfg.degree && n > 1)
    for (int v = 0; v < n; ++v) node_(v, cfg.k_eig) = deg[v] / static_cast<double>(n - 1);

  if (cfg.cycles) {
    const auto c = cycle_counts(g);
    graph_(col) = c.c3 / n;
    graph_(col + 1) = c.c4 / n;
    graph_(col + 2) = c.c5 / n;
  }
  col += 3;
  if (cfg.degree && n > 1) {
    double mean = 0, sq = 0;
    for (int d : deg) mean += d;
    mean /= n;
    for (int d : deg) sq += (d - mean) * (d - mean);
    graph_(col) = mean / (n - 1);
    graph_(col + 1) = std::sqrt(sq / n) / (n - 1);
  }
  col += 2;
  if (cfg.class_frequencies) {
    for (int x : g.node_labels()) graph_(col + x) += 1.0 / n;
    const double slots = static_cast<double>(pair_count(n));
    if (slots > 0) {
      graph_(col + spec.node_classes) = 1.0 - static_cast<double>(g.num_edges()) / slots;
      for (int y : g.edge_labels()) graph_(col + spec.node_classes + y) += 1.0 / slots;
    }
  }
}

Eigen::MatrixXd GraphEncoder::pair_features(std::span<const PairIndex> pairs) {
  Eigen::MatrixXd out =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(pairs.size()), cfg_.pair_width());
  if (!cfg_.distance && !cfg_.adamic_adar) return out;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto [i, j] = pair_from_index(pairs[p], num_nodes_);
    const auto row = static_cast<Eigen::Index>(p);
    if (cfg_.distance) {
      auto& dist = bfs_cache_[i];
      if (dist.empty()) dist = bfs_distances(adj_, i, cfg_.hop_cap);
      const int d = dist[j];
      out(row, d < 0 ? cfg_.hop_cap : d - 1) = 1.0;
    }
    if (cfg_.adamic_adar) out(row, cfg_.hop_cap + 1) = adamic_adar(adj_, i, j);
  }
  return out;
}

EncodedFeatures GraphEncoder::encode(std::span<const PairIndex> pairs) {
  return {node_, pair_features(pairs), graph_};
}

EncodedFeatures compute_encodings(const SparseGraph& g, std::span<const PairIndex> pairs,
                                  const EncodingConfig& cfg, const GraphSpec& spec) {
  return GraphEncoder(g, cfg, spec).encode(pairs);
}

}  // namespace sgdiff
