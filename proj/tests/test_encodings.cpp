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


#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "sgdiff/encodings.hpp"

using namespace sgdiff;

namespace {

// All-pairs shortest paths by Floyd-Warshall; -1 when unreachable.
std::vector<std::vector<int>> floyd(const SparseGraph& g) {
  const int n = g.num_nodes();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int v = 0; v < n; ++v) d[v][v] = 0;
  for (const auto& e : g.edges()) d[e.i][e.j] = d[e.j][e.i] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  for (auto& row : d)
    for (int& x : row)
      if (x >= inf) x = -1;
  return d;
}

}  // namespace

TEST_SUITE("encodings") {

TEST_CASE("cycle counts match enumeration") {
  Rng rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng.below(6));
    const auto g = oracle::random_graph(n, 0.2 + 0.6 * rng.uniform(), 1, 2, rng);
    const auto c = cycle_counts(g);
    CHECK(c.c3 == doctest::Approx(oracle::enumerate_cycles(g, 3)));
    CHECK(c.c4 == doctest::Approx(oracle::enumerate_cycles(g, 4)));
    CHECK(c.c5 == doctest::Approx(oracle::enumerate_cycles(g, 5)));
  }
}

TEST_CASE("cycle counts of small named graphs") {
  std::vector<NodePair> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  const SparseGraph complete(4, std::vector<int>(4, 0), k4, std::vector<int>(6, 1));
  const auto c = cycle_counts(complete);
  CHECK(c.c3 == doctest::Approx(4));
  CHECK(c.c4 == doctest::Approx(3));
  CHECK(c.c5 == doctest::Approx(0));
  std::vector<NodePair> ring{{0, 1}, {0, 4}, {1, 2}, {2, 3}, {3, 4}};
  const SparseGraph pentagon(5, std::vector<int>(5, 0), ring, std::vector<int>(5, 1));
  CHECK(cycle_counts(pentagon).c5 == doctest::Approx(1));
  CHECK(cycle_counts(pentagon).c4 == doctest::Approx(0));
}

TEST_CASE("spectrum matches a dense eigen-solve") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(9, 0.3, 1, 2, rng);
    const auto s = normalized_laplacian_spectrum(g);
    const auto deg = degrees(g);
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(9, 9);
    for (int i = 0; i < 9; ++i)
      for (int j = 0; j < 9; ++j)
        if (g.edge_label(i, j)) lap(i, j) = -1.0 / std::sqrt(double(deg[i]) * deg[j]);
    for (int v = 0; v < 9; ++v) {
      const Eigen::VectorXd x = s.vectors.col(v);
      CHECK((lap * x - s.values(v) * x).norm() < 1e-9);
      CHECK(x.norm() == doctest::Approx(1.0));
      Eigen::Index arg;
      x.cwiseAbs().maxCoeff(&arg);
      CHECK(x(arg) > 0);
    }
    CHECK(s.values.minCoeff() > -1e-9);
    CHECK(s.values.maxCoeff() < 2 + 1e-9);
    CHECK(std::is_sorted(s.values.data(), s.values.data() + 9));
  }
}

TEST_CASE("pair features: capped distance and Adamic-Adar") {
  Rng rng(7);
  EncodingConfig cfg;
  cfg.hop_cap = 3;
  const auto spec = GraphSpec::uniform(1, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(10, 0.15, 1, 2, rng);
    std::vector<PairIndex> all(static_cast<std::size_t>(pair_count(10)));
    std::iota(all.begin(), all.end(), PairIndex{0});
    const auto enc = compute_encodings(g, all, cfg, spec);
    const auto d = floyd(g);
    const auto deg = degrees(g);
    REQUIRE(enc.pair.cols() == cfg.pair_width());
    for (std::size_t p = 0; p < all.size(); ++p) {
      const auto [i, j] = pair_from_index(all[p], 10);
      const int dist = d[i][j];
      const int col = (dist < 0 || dist > 3) ? 3 : dist - 1;
      const auto row = static_cast<Eigen::Index>(p);
      CHECK(enc.pair(row, col) == 1.0);
      CHECK(enc.pair.row(row).head(4).sum() == 1.0);
      double aa = 0;
      for (int u = 0; u < 10; ++u)
        if (g.edge_label(i, u) && g.edge_label(j, u) && deg[u] >= 2) aa += 1.0 / std::log(deg[u]);
      CHECK(enc.pair(row, 4) == doctest::Approx(aa));
    }
  }
}

TEST_CASE("feature widths and disabled families") {
  EncodingConfig cfg;
  cfg.k_eig = 4;
  cfg.hop_cap = 5;
  const GraphSpec spec = GraphSpec::uniform(2, 3);
  Rng rng(9);
  const auto g = oracle::random_graph(7, 0.4, 2, 3, rng);
  std::vector<PairIndex> pairs{0, 5, 20};
  const auto enc = compute_encodings(g, pairs, cfg, spec);
  CHECK(enc.node.rows() == 7);
  CHECK(enc.node.cols() == 5);
  CHECK(enc.pair.rows() == 3);
  CHECK(enc.pair.cols() == 7);
  CHECK(enc.graph.size() == cfg.graph_width(2, 3));
  cfg.eigen = cfg.cycles = cfg.degree = cfg.distance = cfg.adamic_adar = false;
  cfg.class_frequencies = false;
  const auto off = compute_encodings(g, pairs, cfg, spec);
  CHECK(off.node.isZero());
  CHECK(off.pair.isZero());
  CHECK(off.graph.isZero());
}

TEST_CASE("graph features: class frequencies and cycles") {
  const GraphSpec spec = GraphSpec::uniform(2, 3);
  EncodingConfig cfg;
  cfg.k_eig = 2;
  // Triangle 0-1-2 plus pendant 3.
  const SparseGraph g(4, {0, 1, 1, 1}, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}, {1, 1, 2, 1});
  const auto enc = compute_encodings(g, {}, cfg, spec);
  const int col = cfg.k_eig;
  CHECK(enc.graph(col) == doctest::Approx(0.25));  // one triangle over n = 4
  const int cls = col + 5;
  CHECK(enc.graph(cls) == doctest::Approx(0.25));
  CHECK(enc.graph(cls + 1) == doctest::Approx(0.75));
  CHECK(enc.graph(cls + 2) == doctest::Approx(2.0 / 6));
  CHECK(enc.graph(cls + 3) == doctest::Approx(3.0 / 6));
  CHECK(enc.graph(cls + 4) == doctest::Approx(1.0 / 6));
  CHECK(enc.graph(enc.graph.size() - 1) == 0.0);
}

TEST_CASE("encodings are permutation covariant") {
  Rng rng(11);
  EncodingConfig cfg;
  cfg.k_eig = 3;
  const GraphSpec spec = GraphSpec::uniform(2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = oracle::random_graph(8, 0.4, 2, 2, rng);
    std::vector<int> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const auto pg = permute_nodes(g, perm);
    std::vector<PairIndex> pairs, mapped;
    for (int i = 0; i < 8; ++i)
      for (int j = i + 1; j < 8; ++j) {
        pairs.push_back(pair_index(i, j, 8));
        mapped.push_back(pair_index(std::min(perm[i], perm[j]), std::max(perm[i], perm[j]), 8));
      }
    const auto a = compute_encodings(g, pairs, cfg, spec);
    const auto b = compute_encodings(pg, mapped, cfg, spec);
    CHECK((a.pair - b.pair).cwiseAbs().maxCoeff() < 1e-12);
    // Graph-level features are invariant (eigenvalues, cycles, moments).
    CHECK((a.graph - b.graph).cwiseAbs().maxCoeff() < 1e-9);
    for (int v = 0; v < 8; ++v)
      CHECK(a.node(v, cfg.k_eig) == doctest::Approx(b.node(perm[v], cfg.k_eig)));
  }
}

TEST_CASE("bfs respects the cap") {
  std::vector<std::vector<int>> path{{1}, {0, 2}, {1, 3}, {2, 4}, {3}};
  const auto d = bfs_distances(path, 0, 2);
  CHECK(d == std::vector<int>{0, 1, 2, -1, -1});
}

}  // TEST_SUITE
