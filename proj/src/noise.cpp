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

#include "sgdiff/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sgdiff/error.hpp"

namespace sgdiff {

NoiseSchedule NoiseSchedule::from_alphas(std::vector<double> alphas) {
  SGDIFF_REQUIRE(!alphas.empty(), "NoiseSchedule: need at least one step");
  NoiseSchedule s;
  s.alpha_bar_.reserve(alphas.size() + 1);
  s.alpha_bar_.push_back(1.0);
  for (double a : alphas) {
    SGDIFF_REQUIRE(a > 0 && a <= 1, "NoiseSchedule: alpha must lie in (0, 1]");
    s.alpha_bar_.push_back(s.alpha_bar_.back() * a);
  }
  s.alpha_ = std::move(alphas);
  return s;
}

double NoiseSchedule::alpha(int t) const {
  SGDIFF_REQUIRE(t >= 1 && t <= steps(), "NoiseSchedule: step out of range");
  return alpha_[t - 1];
}

double NoiseSchedule::alpha_bar(int t) const {
  SGDIFF_REQUIRE(t >= 0 && t <= steps(), "NoiseSchedule: step out of range");
  return alpha_bar_[t];
}

double NoiseSchedule::alpha_between(int from, int to) const {
  SGDIFF_REQUIRE(0 <= from && from <= to && to <= steps(),
                 "NoiseSchedule: invalid step interval");
  double prod = 1.0;
  for (int t = from + 1; t <= to; ++t) prod *= alpha_[t - 1];
  return prod;
}

NoiseSchedule build_schedule(int steps, std::string_view kind) {
  SGDIFF_REQUIRE(steps >= 1, "build_schedule: need T >= 1");
  if (kind != "cosine")
    throw PreconditionError("build_schedule: unknown schedule kind '" +
                            std::string(kind) + "'");
  constexpr double s = 0.008;
  auto f = [&](int t) {
    const double c = std::cos((static_cast<double>(t) / steps + s) / (1 + s) *
                              std::numbers::pi / 2);
    return c * c;
  };
  std::vector<double> alphas(steps);
  double prev = 1.0;
  const double f0 = f(0);
  for (int t = 1; t <= steps; ++t) {
    const double bar = f(t) / f0;
    alphas[t - 1] = std::clamp(bar / prev, 0.0, 1.0);
    prev = bar;
  }
  // cos(pi/2) is not exactly zero in floating point, so the last alpha stays
  // positive.
  for (double& a : alphas) a = std::max(a, 1e-300);
  return NoiseSchedule::from_alphas(std::move(alphas));
}

TransitionMatrix::TransitionMatrix(int size, std::vector<double> data)
    : size_(size), data_(std::move(data)) {
  SGDIFF_REQUIRE(size_ >= 1 &&
                     data_.size() == static_cast<std::size_t>(size_) * size_,
                 "TransitionMatrix: data size mismatch");
}

TransitionMatrix TransitionMatrix::marginal(double alpha, std::span<const double> p) {
  const int c = static_cast<int>(p.size());
  std::vector<double> d(static_cast<std::size_t>(c) * c);
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) d[i * c + j] = (i == j ? alpha : 0.0) + (1 - alpha) * p[j];
  return TransitionMatrix(c, std::move(d));
}

TransitionMatrix TransitionMatrix::identity(int size) {
  std::vector<double> d(static_cast<std::size_t>(size) * size, 0.0);
  for (int i = 0; i < size; ++i) d[i * size + i] = 1.0;
  return TransitionMatrix(size, std::move(d));
}

TransitionMatrix operator*(const TransitionMatrix& a, const TransitionMatrix& b) {
  SGDIFF_REQUIRE(a.size_ == b.size_, "TransitionMatrix: size mismatch in product");
  const int c = a.size_;
  std::vector<double> d(static_cast<std::size_t>(c) * c, 0.0);
  for (int i = 0; i < c; ++i)
    for (int k = 0; k < c; ++k)
      for (int j = 0; j < c; ++j) d[i * c + j] += a(i, k) * b(k, j);
  return TransitionMatrix(c, std::move(d));
}

TransitionMatrix transition_matrix(const NoiseSchedule& schedule, int t,
                                   std::span<const double> marginals,
                                   bool cumulative) {
  SGDIFF_REQUIRE(t >= 1 && t <= schedule.steps(),
                 "transition_matrix: step " + std::to_string(t) + " out of range");
  const double a = cumulative ? schedule.alpha_bar(t) : schedule.alpha(t);
  return TransitionMatrix::marginal(a, marginals);
}

TransitionMatrix stride_matrix(const NoiseSchedule& schedule, int from, int to,
                               std::span<const double> marginals) {
  // Marginal kernels with a common p are closed under products: the alphas
  // multiply. Computing the product directly avoids dividing alpha_bar values
  // that underflow near t = T.
  return TransitionMatrix::marginal(schedule.alpha_between(from, to), marginals);
}

std::vector<PairIndex> vacant_ranks_to_pairs(std::span<const PairIndex> occupied,
                                             std::span<const std::int64_t> vacant_ranks) {
  // occupied[j] - j counts vacant slots below occupied[j] and is nondecreasing,
  // so the number of occupied slots preceding vacant rank r is the count of
  // j with occupied[j] - j <= r.
  std::vector<PairIndex> out;
  out.reserve(vacant_ranks.size());
  for (std::int64_t r : vacant_ranks) {
    std::size_t lo = 0, hi = occupied.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (occupied[mid] - static_cast<PairIndex>(mid) <= r)
        lo = mid + 1;
      else
        hi = mid;
    }
    out.push_back(r + static_cast<PairIndex>(lo));
  }
  return out;
}

std::vector<PairIndex> sample_vacant_pairs(int num_nodes,
                                           std::span<const PairIndex> occupied,
                                           std::int64_t count, Rng& rng) {
  const std::int64_t total = pair_count(num_nodes);
  for (std::size_t k = 0; k < occupied.size(); ++k) {
    SGDIFF_REQUIRE(occupied[k] >= 0 && occupied[k] < total,
                   "sample_vacant_pairs: occupied index out of range");
    SGDIFF_REQUIRE(k == 0 || occupied[k] > occupied[k - 1],
                   "sample_vacant_pairs: occupied indices must be sorted and unique");
  }
  const std::int64_t vacant = total - static_cast<std::int64_t>(occupied.size());
  SGDIFF_REQUIRE(count >= 0 && count <= vacant,
                 "sample_vacant_pairs: requested " + std::to_string(count) +
                     " pairs but only " + std::to_string(vacant) + " are vacant");
  const auto ranks = rng.sample_without_replacement(vacant, count);
  return vacant_ranks_to_pairs(occupied, ranks);
}

SparseGraph apply_transition(const SparseGraph& g, const TransitionMatrix& node_kernel,
                             const TransitionMatrix& edge_kernel, Rng& rng) {
  const int n = g.num_nodes();
  std::vector<int> nodes(n);
  for (int v = 0; v < n; ++v) nodes[v] = rng.categorical(node_kernel.row(g.node_labels()[v]));

  const auto occupied = g.pair_indices();
  std::vector<PairIndex> kept;
  std::vector<int> kept_labels;
  for (std::size_t e = 0; e < occupied.size(); ++e) {
    const int y = rng.categorical(edge_kernel.row(g.edge_labels()[e]));
    if (y != 0) {
      kept.push_back(occupied[e]);
      kept_labels.push_back(y);
    }
  }

  const std::int64_t vacant = pair_count(n) - static_cast<std::int64_t>(occupied.size());
  const auto from_empty = edge_kernel.row(0);
  const double q = std::clamp(1.0 - from_empty[0], 0.0, 1.0);
  const std::int64_t fresh_count = rng.binomial(vacant, q);
  const auto fresh = sample_vacant_pairs(n, occupied, fresh_count, rng);
  std::vector<int> fresh_labels(fresh.size());
  for (auto& y : fresh_labels) y = 1 + rng.categorical(from_empty.subspan(1));

  std::vector<PairIndex> idx;
  std::vector<int> labels;
  idx.reserve(kept.size() + fresh.size());
  labels.reserve(kept.size() + fresh.size());
  std::size_t a = 0, b = 0;
  while (a < kept.size() || b < fresh.size()) {
    if (b == fresh.size() || (a < kept.size() && kept[a] < fresh[b])) {
      idx.push_back(kept[a]);
      labels.push_back(kept_labels[a++]);
    } else {
      idx.push_back(fresh[b]);
      labels.push_back(fresh_labels[b++]);
    }
  }
  return SparseGraph::from_pair_indices(n, std::move(nodes), idx, std::move(labels));
}

SparseGraph apply_noise(const SparseGraph& g, int t, const NoiseSchedule& schedule,
                        const GraphSpec& spec, Rng& rng) {
  return apply_transition(g, transition_matrix(schedule, t, spec.node_marginals, true),
                          transition_matrix(schedule, t, spec.edge_marginals, true), rng);
}

SparseGraph apply_noise_step(const SparseGraph& g_prev, int t,
                             const NoiseSchedule& schedule, const GraphSpec& spec,
                             Rng& rng) {
  return apply_transition(g_prev,
                          transition_matrix(schedule, t, spec.node_marginals, false),
                          transition_matrix(schedule, t, spec.edge_marginals, false), rng);
}

PosteriorKernel::PosteriorKernel(const NoiseSchedule& schedule, int t, int k,
                                 std::span<const double> marginals) {
  SGDIFF_REQUIRE(k >= 1 && k <= t && t <= schedule.steps(),
                 "posterior: require 1 <= k <= t <= T");
  stride_ = stride_matrix(schedule, t - k, t, marginals);
  before_ = TransitionMatrix::marginal(schedule.alpha_bar(t - k), marginals);
  current_ = TransitionMatrix::marginal(schedule.alpha_bar(t), marginals);
}

void PosteriorKernel::distribution(int z_t, std::span<const double> p_x0,
                                   std::span<double> out) const {
  const int c = classes();
  SGDIFF_REQUIRE(z_t >= 0 && z_t < c, "posterior: class out of range");
  SGDIFF_REQUIRE(static_cast<int>(p_x0.size()) == c &&
                     static_cast<int>(out.size()) == c,
                 "posterior: distribution length mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  for (int x0 = 0; x0 < c; ++x0) {
    if (p_x0[x0] == 0) continue;
    const double denom = current_(x0, z_t);
    if (!(denom > 0))
      throw NumericalError("posterior: q(z_t = " + std::to_string(z_t) +
                           " | x0 = " + std::to_string(x0) +
                           ") is zero but x0 has positive predicted mass");
    const double w = p_x0[x0] / denom;
    for (int j = 0; j < c; ++j) out[j] += w * stride_(j, z_t) * before_(x0, j);
  }
  double total = 0;
  for (double v : out) total += v;
  if (!(total > 0) || !std::isfinite(total))
    throw NumericalError("posterior: degenerate (zero or non-finite) mass");
  for (double& v : out) v /= total;
}

std::vector<double> PosteriorKernel::distribution(int z_t,
                                                  std::span<const double> p_x0) const {
  std::vector<double> out(classes());
  distribution(z_t, p_x0, out);
  return out;
}

std::vector<double> posterior_distribution(int z_t, std::span<const double> p_x0,
                                           int t, int k,
                                           const NoiseSchedule& schedule,
                                           std::span<const double> marginals) {
  return PosteriorKernel(schedule, t, k, marginals).distribution(z_t, p_x0);
}

SparseGraph prior_sample(int num_nodes, const GraphSpec& spec, Rng& rng) {
  SGDIFF_REQUIRE(num_nodes >= 1, "prior_sample: need at least one node");
  // A kernel whose every row is the marginal turns the empty graph into an
  // i.i.d. marginal draw.
  const SparseGraph empty(num_nodes, std::vector<int>(num_nodes, 0), {}, {});
  return apply_transition(empty, TransitionMatrix::marginal(0.0, spec.node_marginals),
                          TransitionMatrix::marginal(0.0, spec.edge_marginals), rng);
}

double lemma_bound(const LemmaBoundQuery& q) {
  const double r = q.clean_ratio, k = q.threshold;
  SGDIFF_REQUIRE(q.num_nodes >= 2, "lemma_bound: need n >= 2");
  SGDIFF_REQUIRE(r > 0 && r < 0.25, "lemma_bound: require 0 < r < 1/4");
  SGDIFF_REQUIRE(k > r && k < 1, "lemma_bound: require r < k < 1");
  const double pairs = static_cast<double>(pair_count(q.num_nodes));
  return -pairs * (k * std::log(k / r) + (1 - r) * std::log((1 - k) / (1 - r)));
}

double lemma_monte_carlo(int num_nodes, double clean_ratio, double threshold,
                         std::int64_t trials, Rng& rng) {
  SGDIFF_REQUIRE(trials >= 1, "lemma_monte_carlo: need at least one trial");
  const std::int64_t pairs = pair_count(num_nodes);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < trials; ++s) {
    const auto m = rng.binomial(pairs, clean_ratio);
    if (static_cast<double>(m) / static_cast<double>(pairs) >= threshold) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace sgdiff
