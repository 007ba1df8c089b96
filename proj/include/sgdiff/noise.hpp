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

#ifndef SGDIFF_NOISE_HPP_
#define SGDIFF_NOISE_HPP_

#include <span>
#include <string_view>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

/// Per-step keep probabilities alpha^t (t = 1..T) and their running products
/// alpha_bar^t, with alpha_bar^0 = 1.
class NoiseSchedule {
 public:
  static NoiseSchedule from_alphas(std::vector<double> alphas);

  int steps() const { return static_cast<int>(alpha_.size()); }
  double alpha(int t) const;
  double beta(int t) const { return 1.0 - alpha(t); }
  double alpha_bar(int t) const;
  /// alpha^{from+1} * ... * alpha^{to}; 1 when from == to.
  double alpha_between(int from, int to) const;

 private:
  std::vector<double> alpha_;      // alpha_[t-1] = alpha^t
  std::vector<double> alpha_bar_;  // alpha_bar_[t] = alpha_bar^t
};

/// Supported kinds: "cosine" (s = 0.008).
NoiseSchedule build_schedule(int steps, std::string_view kind);

/// Dense row-stochastic c x c matrix, row-major.
class TransitionMatrix {
 public:
  TransitionMatrix() = default;
  TransitionMatrix(int size, std::vector<double> data);

  /// alpha I + (1 - alpha) 1 p'.
  static TransitionMatrix marginal(double alpha, std::span<const double> p);
  static TransitionMatrix identity(int size);

  int size() const { return size_; }
  double operator()(int row, int col) const { return data_[row * size_ + col]; }
  std::span<const double> row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * size_,
            static_cast<std::size_t>(size_)};
  }
  const std::vector<double>& data() const { return data_; }

  friend TransitionMatrix operator*(const TransitionMatrix& a,
                                    const TransitionMatrix& b);

 private:
  int size_ = 0;
  std::vector<double> data_;
};

/// Q^t (cumulative = false) or Qbar^t = Q^1 ... Q^t (cumulative = true).
TransitionMatrix transition_matrix(const NoiseSchedule& schedule, int t,
                                   std::span<const double> marginals,
                                   bool cumulative);

/// Q^{from+1} ... Q^{to}, the kernel that moves a label from step `from`
/// to step `to`.
TransitionMatrix stride_matrix(const NoiseSchedule& schedule, int from, int to,
                               std::span<const double> marginals);

/// Maps ranks among vacant slots to condensed indices. `occupied` and
/// `vacant_ranks` must be sorted ascending.
std::vector<PairIndex> vacant_ranks_to_pairs(std::span<const PairIndex> occupied,
                                             std::span<const std::int64_t> vacant_ranks);

/// `count` distinct vacant condensed indices, uniformly at random, sorted.
/// Memory is O(|occupied| + count); no n x n structure is built.
std::vector<PairIndex> sample_vacant_pairs(int num_nodes,
                                           std::span<const PairIndex> occupied,
                                           std::int64_t count, Rng& rng);

/// Sparse corruption of every node and every pair by the given kernels:
/// existing edges are resampled and dropped on class 0, then a
/// Binomial(vacant, 1 - Q[0,0]) number of new edges is placed uniformly on
/// vacant pairs with labels from Q[0, 1:].
SparseGraph apply_transition(const SparseGraph& g, const TransitionMatrix& node_kernel,
                             const TransitionMatrix& edge_kernel, Rng& rng);

/// Draws G^t ~ q(G^t | G) with the cumulative matrices.
SparseGraph apply_noise(const SparseGraph& g, int t, const NoiseSchedule& schedule,
                        const GraphSpec& spec, Rng& rng);

/// Draws G^t ~ q(G^t | G^{t-1}) with the single-step matrices.
SparseGraph apply_noise_step(const SparseGraph& g_prev, int t,
                             const NoiseSchedule& schedule, const GraphSpec& spec,
                             Rng& rng);

/// q(z^{t-k} | z^t, x0) marginalized over a distribution on x0.
///
/// Holds the three matrices for a fixed (t, k) so that repeated queries
/// during a reverse step do not rebuild them.
class PosteriorKernel {
 public:
  PosteriorKernel(const NoiseSchedule& schedule, int t, int k,
                  std::span<const double> marginals);

  int classes() const { return stride_.size(); }

  /// Writes the distribution over the class at step t-k into `out`.
  void distribution(int z_t, std::span<const double> p_x0,
                    std::span<double> out) const;
  std::vector<double> distribution(int z_t, std::span<const double> p_x0) const;

 private:
  TransitionMatrix stride_;   // Q^{t-k+1} ... Q^t
  TransitionMatrix before_;   // Qbar^{t-k}
  TransitionMatrix current_;  // Qbar^t
};

std::vector<double> posterior_distribution(int z_t, std::span<const double> p_x0,
                                           int t, int k,
                                           const NoiseSchedule& schedule,
                                           std::span<const double> marginals);

/// G^T drawn from the product of marginals: nodes iid p_X, pairs iid p_Y.
SparseGraph prior_sample(int num_nodes, const GraphSpec& spec, Rng& rng);

struct LemmaBoundQuery {
  int num_nodes = 0;
  double clean_ratio = 0;  // r
  double threshold = 0;    // k
};

/// -(n(n-1)/2) (k log(k/r) + (1-r) log((1-k)/(1-r))): the upper bound on
/// log P[r_t >= k].
double lemma_bound(const LemmaBoundQuery& q);

/// Fraction of `trials` Binomial(n(n-1)/2, r) draws whose ratio reaches k.
double lemma_monte_carlo(int num_nodes, double clean_ratio, double threshold,
                         std::int64_t trials, Rng& rng);

}  // namespace sgdiff

#endif  // SGDIFF_NOISE_HPP_
