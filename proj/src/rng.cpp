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

#include "sgdiff/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sgdiff/error.hpp"

namespace sgdiff {

namespace {

// Inversion by summing geometric waiting times; expected cost O(n p).
std::int64_t binomial_inversion(std::int64_t n, double p, Rng& rng) {
  const double log_q = std::log1p(-p);
  double geom_sum = 0;
  std::int64_t successes = 0;
  while (true) {
    geom_sum += std::ceil(std::log(rng.uniform_open()) / log_q);
    if (geom_sum > static_cast<double>(n)) return successes;
    ++successes;
  }
}

double stirling_tail(double k) {
  static const double kTail[] = {
      0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
      0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
      0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
      0.00833056343336287};
  if (k <= 9) return kTail[static_cast<int>(k)];
  const double kp1sq = (k + 1) * (k + 1);
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1);
}

// Hormann's transformed rejection with squeeze (BTRS). Exact; requires
// n p >= 10 and p <= 1/2.
std::int64_t binomial_btrs(std::int64_t n_int, double p, Rng& rng) {
  const double n = static_cast<double>(n_int);
  const double spq = std::sqrt(n * p * (1 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = n * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / (1 - p);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1) * p);

  while (true) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform_open();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2 * a / us + b) * u + c);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(k);
    if (k < 0 || k > n) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound =
        (m + 0.5) * std::log((m + 1) / (r * (n - m + 1))) +
        (n + 1) * std::log((n - m + 1) / (n - k + 1)) +
        (k + 0.5) * std::log(r * (n - k + 1) / (k + 1)) + stirling_tail(m) +
        stirling_tail(n - m) - stirling_tail(k) - stirling_tail(n - k);
    if (v <= bound) return static_cast<std::int64_t>(k);
  }
}

}  // namespace

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

double Rng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t bound) {
  SGDIFF_REQUIRE(bound > 0, "Rng::below: bound must be positive");
  // Rejection on the largest multiple of bound keeps every value equiprobable.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

int Rng::categorical(std::span<const double> weights) {
  SGDIFF_REQUIRE(!weights.empty(), "categorical: empty weight vector");
  double total = 0;
  for (double w : weights) {
    SGDIFF_REQUIRE(w >= 0 && std::isfinite(w),
                   "categorical: weights must be finite and nonnegative");
    total += w;
  }
  SGDIFF_REQUIRE(total > 0, "categorical: weights sum to zero");
  const double target = uniform() * total;
  double acc = 0;
  int last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    acc += weights[i];
    last_positive = static_cast<int>(i);
    if (target < acc) return last_positive;
  }
  return last_positive;
}

std::int64_t Rng::binomial(std::int64_t trials, double p) {
  SGDIFF_REQUIRE(trials >= 0, "binomial: negative trial count");
  SGDIFF_REQUIRE(p >= 0 && p <= 1, "binomial: p outside [0, 1]");
  if (trials == 0 || p == 0) return 0;
  if (p == 1) return trials;
  const bool flip = p > 0.5;
  const double q = flip ? 1 - p : p;
  std::int64_t draw = static_cast<double>(trials) * q >= 10
                          ? binomial_btrs(trials, q, *this)
                          : binomial_inversion(trials, q, *this);
  return flip ? trials - draw : draw;
}

std::vector<std::int64_t> Rng::sample_without_replacement(
    std::int64_t population, std::int64_t count) {
  SGDIFF_REQUIRE(count >= 0 && count <= population,
                 "sample_without_replacement: count exceeds population");
  std::vector<std::int64_t> out;
  if (count == population) {
    out.resize(static_cast<std::size_t>(population));
    for (std::int64_t i = 0; i < population; ++i) out[i] = i;
    return out;
  }
  std::set<std::int64_t> chosen;
  for (std::int64_t j = population - count; j < population; ++j) {
    const auto t =
        static_cast<std::int64_t>(below(static_cast<std::uint64_t>(j) + 1));
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  return out;
}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(mix64(seed_ ^ mix64(stream + 0x5851f42d4c957f2dULL)));
}

}  // namespace sgdiff
