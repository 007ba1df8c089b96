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

#ifndef SGDIFF_RNG_HPP_
#define SGDIFF_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace sgdiff {

/// Seeded random stream.
///
/// All variates are derived from the raw 64-bit output of mt19937_64, whose
/// sequence is fixed by the standard. The std:: distribution classes are
/// implementation-defined, so none of them are used here; this keeps every
/// sampled graph bit-reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform double in (0, 1); safe to pass to log().
  double uniform_open();

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Index drawn from the (possibly unnormalized) weights.
  int categorical(std::span<const double> weights);

  /// Exact Binomial(trials, p) draw.
  std::int64_t binomial(std::int64_t trials, double p);

  /// `count` distinct values from [0, population), sorted ascending.
  /// Floyd's algorithm: O(count log count) memory and time, independent
  /// of population size.
  std::vector<std::int64_t> sample_without_replacement(std::int64_t population,
                                                       std::int64_t count);

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

  /// Independent child stream; the same (seed, stream) always yields the
  /// same child.
  Rng split(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer, used for seed derivation and config hashing.
std::uint64_t mix64(std::uint64_t x);

}  // namespace sgdiff

#endif  // SGDIFF_RNG_HPP_
