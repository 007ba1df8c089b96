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

#ifndef SGDIFF_METRICS_HPP_
#define SGDIFF_METRICS_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "sgdiff/graph.hpp"

namespace sgdiff {

using Histogram = std::vector<double>;

inline constexpr int kClusteringBins = 100;
inline constexpr int kSpectralBins = 200;

/// Normalized histograms. An edgeless graph has degree histogram {1}; its
/// isolated nodes contribute Laplacian eigenvalue 1.
struct GraphDescriptors {
  Histogram degree;      // support 0..max degree
  Histogram clustering;  // kClusteringBins over [0, 1]
  Histogram spectral;    // kSpectralBins over [0, 2]
};

std::vector<int> triangles_per_node(const SparseGraph& g);
std::vector<double> local_clustering(const SparseGraph& g);
GraphDescriptors descriptors(const SparseGraph& g);

/// Value in [0, bins) for x in [lo, hi]; the upper edge falls into the last
/// bin.
int histogram_bin(double x, double lo, double hi, int bins);

/// Half the L1 distance; shorter histograms are zero-padded.
double total_variation(const Histogram& p, const Histogram& q);

/// Biased V-statistic with kernel exp(-TV^2 / (2 sigma^2)), clamped at 0.
double mmd2(std::span<const Histogram> a, std::span<const Histogram> b, double sigma);

bool is_connected(const SparseGraph& g);
double connectivity_fraction(std::span<const SparseGraph> graphs);

struct EvalSigmas {
  double degree = 1.0;
  double clustering = 0.1;
  double spectral = 1.0;
};

struct MetricReport {
  std::string metric;
  double mmd2 = 0;
  double reference_mmd2 = 0;  // MMD^2(train reference, reference)
  double ratio = 0;           // mmd2 / reference_mmd2; NaN when undefined
  std::vector<double> repeats;
  double mean = 0;
  double std = 0;
};

struct EvalReport {
  std::vector<MetricReport> metrics;  // degree, clustering, spectral
  double connectivity = 0;
  double reference_connectivity = 0;
  std::size_t n_generated = 0;
  std::size_t n_reference = 0;
  int repeats = 1;

  const MetricReport& metric(const std::string& name) const;
  nlohmann::ordered_json to_json() const;
};

/// Generated set `repeat` when evaluate is asked for several repeats.
using GraphSetSource = std::function<std::vector<SparseGraph>(int repeat)>;

EvalReport evaluate(std::span<const SparseGraph> generated,
                    std::span<const SparseGraph> reference,
                    std::span<const SparseGraph> train_reference, const EvalSigmas& sigmas);

/// Draws `repeats` generated sets from the source; the headline MMD values
/// are those of repeat 0, mean and std span all repeats.
EvalReport evaluate_repeated(const GraphSetSource& source, int repeats,
                             std::span<const SparseGraph> reference,
                             std::span<const SparseGraph> train_reference,
                             const EvalSigmas& sigmas);

}  // namespace sgdiff

#endif  // SGDIFF_METRICS_HPP_
