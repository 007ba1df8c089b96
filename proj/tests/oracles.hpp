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

// Reference implementations used by the tests. Nothing here calls into the
// library code under test beyond the plain data types.

#ifndef SGDIFF_TESTS_ORACLES_HPP_
#define SGDIFF_TESTS_ORACLES_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdint>
#include <functional>
#include <queue>
#include <set>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/rng.hpp"

namespace oracle {

/// Pearson chi-square p-value. Bins with zero expected probability must be
/// empty; they are skipped. Returns 0 when an impossible bin was hit.
inline double chi_square_p(const std::vector<std::int64_t>& counts,
                           const std::vector<double>& probs) {
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  double stat = 0;
  int bins = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (probs[k] <= 0) {
      if (counts[k] > 0) return 0.0;
      continue;
    }
    const double e = probs[k] * static_cast<double>(total);
    stat += (counts[k] - e) * (counts[k] - e) / e;
    ++bins;
  }
  if (bins < 2) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(bins - 1), stat));
}

/// Pearson statistic for counts that sum `picks` distinct cells per draw
/// out of `cells` equiprobable cells; rescaled so it is approximately
/// chi-square with cells - 1 degrees of freedom.
inline double without_replacement_p(const std::vector<std::int64_t>& counts, int picks) {
  const int cells = static_cast<int>(counts.size());
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  if (cells < 2 || picks >= cells) return 1.0;
  const double e = static_cast<double>(total) / cells;
  double stat = 0;
  for (auto c : counts) stat += (c - e) * (c - e) / e;
  stat *= static_cast<double>(cells - 1) / (cells - picks);
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(cells - 1), stat));
}

/// Asymptotic Kolmogorov tail P(sqrt(n) D > x). Conservative for discrete
/// reference distributions.
inline double kolmogorov_p(double d, std::int64_t n) {
  const double x = (std::sqrt(static_cast<double>(n)) + 0.12 +
                    0.11 / std::sqrt(static_cast<double>(n))) * d;
  if (x < 0.2) return 1.0;
  double p = 0;
  for (int k = 1; k <= 100; ++k) p += 2 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  return std::clamp(p, 0.0, 1.0);
}

/// KS statistic of integer samples against a CDF on the integers.
inline double ks_statistic(std::vector<std::int64_t> samples,
                           const std::function<double(std::int64_t)>& cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0;
  std::size_t i = 0;
  while (i < samples.size()) {
    std::size_t j = i;
    while (j < samples.size() && samples[j] == samples[i]) ++j;
    const double below = static_cast<double>(i) / n;
    const double upto = static_cast<double>(j) / n;
    d = std::max({d, std::abs(upto - cdf(samples[i])), std::abs(below - cdf(samples[i] - 1))});
    i = j;
  }
  return d;
}

inline double binomial_pmf(std::int64_t n, double p, std::int64_t k) {
  if (k < 0 || k > n) return 0.0;
  if (p <= 0) return k == 0 ? 1.0 : 0.0;
  if (p >= 1) return k == n ? 1.0 : 0.0;
  const double lg = std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
  return std::exp(lg + k * std::log(p) + (n - k) * std::log1p(-p));
}

inline double binomial_cdf(std::int64_t n, double p, std::int64_t k) {
  double s = 0;
  for (std::int64_t i = 0; i <= std::min(k, n); ++i) s += binomial_pmf(n, p, i);
  return std::min(s, 1.0);
}

/// alpha I + (1 - alpha) 1 p'.
inline Eigen::MatrixXd marginal_matrix(double alpha, const std::vector<double>& p) {
  const int c = static_cast<int>(p.size());
  Eigen::MatrixXd q = alpha * Eigen::MatrixXd::Identity(c, c);
  for (int r = 0; r < c; ++r)
    for (int k = 0; k < c; ++k) q(r, k) += (1 - alpha) * p[k];
  return q;
}

/// Ordered product Q^{from+1} ... Q^{to}; alphas[t-1] is alpha^t.
inline Eigen::MatrixXd chain_product(const std::vector<double>& alphas, int from, int to,
                                     const std::vector<double>& p) {
  const int c = static_cast<int>(p.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(c, c);
  for (int t = from + 1; t <= to; ++t) m = m * marginal_matrix(alphas[t - 1], p);
  return m;
}

/// Cosine schedule evaluated directly from its closed form.
inline std::vector<double> cosine_alphas(int steps) {
  const double s = 0.008;
  auto f = [&](int t) {
    const double c = std::cos((static_cast<double>(t) / steps + s) / (1 + s) * M_PI / 2);
    return c * c;
  };
  std::vector<double> a(steps);
  for (int t = 1; t <= steps; ++t) a[t - 1] = std::max(f(t) / f(t - 1), 1e-300);
  return a;
}

/// Bayes posterior over the class at step s given z_t and a clean
/// distribution, by explicit enumeration of x0 and z_s.
inline std::vector<double> dense_posterior(const std::vector<double>& alphas, int t, int s,
                                           int z_t, const std::vector<double>& p_x0,
                                           const std::vector<double>& marginals) {
  const Eigen::MatrixXd to_s = chain_product(alphas, 0, s, marginals);
  const Eigen::MatrixXd s_to_t = chain_product(alphas, s, t, marginals);
  const Eigen::MatrixXd to_t = chain_product(alphas, 0, t, marginals);
  const int c = static_cast<int>(marginals.size());
  std::vector<double> out(c, 0.0);
  for (int x0 = 0; x0 < c; ++x0) {
    if (p_x0[x0] == 0) continue;
    const double evidence = to_t(x0, z_t);
    if (evidence <= 0) continue;
    for (int z = 0; z < c; ++z) out[z] += p_x0[x0] * to_s(x0, z) * s_to_t(z, z_t) / evidence;
  }
  double total = 0;
  for (double v : out) total += v;
  for (double& v : out) v /= total;
  return out;
}

/// Random graph with independent edges; labels uniform over the classes.
inline sgdiff::SparseGraph random_graph(int n, double p, int node_classes, int edge_classes,
                                        sgdiff::Rng& rng) {
  std::vector<int> labels(n);
  for (int& x : labels) x = static_cast<int>(rng.below(node_classes));
  std::vector<sgdiff::NodePair> edges;
  std::vector<int> edge_labels;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) {
        edges.push_back({i, j});
        edge_labels.push_back(1 + static_cast<int>(rng.below(edge_classes - 1)));
      }
  return sgdiff::SparseGraph(n, std::move(labels), std::move(edges), std::move(edge_labels));
}

inline std::vector<std::vector<char>> adjacency_matrix(const sgdiff::SparseGraph& g) {
  const int n = g.num_nodes();
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (const auto& e : g.edges()) a[e.i][e.j] = a[e.j][e.i] = 1;
  return a;
}

/// Simple cycles of length `len`, by enumerating closed walks with distinct
/// vertices and dividing out rotations and reflections.
inline double enumerate_cycles(const sgdiff::SparseGraph& g, int len) {
  const auto a = adjacency_matrix(g);
  const int n = g.num_nodes();
  std::int64_t walks = 0;
  std::vector<int> path;
  std::vector<char> used(n, 0);
  std::function<void()> extend = [&] {
    if (static_cast<int>(path.size()) == len) {
      if (a[path.back()][path.front()]) ++walks;
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (used[v] || !a[path.back()][v]) continue;
      used[v] = 1;
      path.push_back(v);
      extend();
      path.pop_back();
      used[v] = 0;
    }
  };
  for (int s = 0; s < n; ++s) {
    used[s] = 1;
    path = {s};
    extend();
    used[s] = 0;
  }
  return static_cast<double>(walks) / (2.0 * len);
}

inline int triangles_at(const sgdiff::SparseGraph& g, int v) {
  const auto a = adjacency_matrix(g);
  const int n = g.num_nodes();
  int count = 0;
  for (int x = 0; x < n; ++x)
    for (int y = x + 1; y < n; ++y)
      if (x != v && y != v && a[v][x] && a[v][y] && a[x][y]) ++count;
  return count;
}

inline bool connected_by_bfs(const sgdiff::SparseGraph& g) {
  const int n = g.num_nodes();
  if (n <= 1) return true;
  const auto a = adjacency_matrix(g);
  std::vector<char> seen(n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (int u = 0; u < n; ++u)
      if (a[v][u] && !seen[u]) {
        seen[u] = 1;
        ++reached;
        q.push(u);
      }
  }
  return reached == n;
}

/// Biased MMD^2 with the Gaussian total-variation kernel, by double loops.
inline double naive_mmd2(const std::vector<std::vector<double>>& x,
                         const std::vector<std::vector<double>>& y, double sigma) {
  auto tv = [](const std::vector<double>& p, const std::vector<double>& q) {
    const std::size_t m = std::max(p.size(), q.size());
    double s = 0;
    for (std::size_t k = 0; k < m; ++k) {
      const double a = k < p.size() ? p[k] : 0.0;
      const double b = k < q.size() ? q[k] : 0.0;
      s += std::abs(a - b);
    }
    return s / 2;
  };
  auto kern = [&](const auto& p, const auto& q) {
    const double d = tv(p, q);
    return std::exp(-d * d / (2 * sigma * sigma));
  };
  double xx = 0, yy = 0, xy = 0;
  for (const auto& p : x)
    for (const auto& q : x) xx += kern(p, q);
  for (const auto& p : y)
    for (const auto& q : y) yy += kern(p, q);
  for (const auto& p : x)
    for (const auto& q : y) xy += kern(p, q);
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  return xx / (nx * nx) + yy / (ny * ny) - 2 * xy / (nx * ny);
}

}  // namespace oracle

#endif  // SGDIFF_TESTS_ORACLES_HPP_
