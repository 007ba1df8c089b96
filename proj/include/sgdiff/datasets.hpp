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

#ifndef SGDIFF_DATASETS_HPP_
#define SGDIFF_DATASETS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgdiff/graph.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff {

inline constexpr std::string_view kDatasetFormat = "sgdiff-graphs";
inline constexpr int kDatasetVersion = 1;

struct DatasetHeader {
  int node_classes = 1;
  int edge_classes = 2;
  std::uint64_t seed = 0;
  std::string config_hash;
  friend bool operator==(const DatasetHeader&, const DatasetHeader&) = default;
};

/// One header line, then one graph per line. `names` is empty or aligned
/// with `graphs`; an empty name is omitted from the record.
struct Dataset {
  DatasetHeader header;
  std::vector<SparseGraph> graphs;
  std::vector<std::string> names;
};

void write_dataset(std::ostream& out, const Dataset& data);
/// `source` names the stream in error messages.
Dataset read_dataset(std::istream& in, std::string_view source = "<stream>");
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

/// a = 1, b = 2. Each pair is an edge independently with probability p.
std::vector<SparseGraph> gen_er(int count, int n_min, int n_max, double p, Rng& rng);

struct SbmParams {
  int min_blocks = 2;
  int max_blocks = 5;
  int min_block_size = 20;
  int max_block_size = 40;
  double p_in = 0.3;
  double p_out = 0.05;

  void validate() const;
};

struct SbmGraph {
  SparseGraph graph;
  std::vector<int> block;  // block id of each node
};

std::vector<SbmGraph> gen_sbm_with_blocks(int count, const SbmParams& params, Rng& rng);
std::vector<SparseGraph> gen_sbm(int count, const SbmParams& params, Rng& rng);

struct DatasetStats {
  std::size_t graph_count = 0;
  int min_nodes = 0, max_nodes = 0;
  std::size_t min_edges = 0, max_edges = 0;
  double min_edge_ratio = 0, max_edge_ratio = 0;  // over graphs with n >= 2
  std::vector<std::pair<int, int>> node_count_histogram;  // (n, graphs), ascending n
  std::vector<int> node_counts;                           // one entry per graph
  std::vector<double> node_marginals;
  std::vector<double> edge_marginals;

  /// Class counts come from the header; marginals from the data.
  GraphSpec spec() const;
};

DatasetStats dataset_stats(std::span<const SparseGraph> graphs, int node_classes,
                           int edge_classes);

/// Named dataset presets. Only "er" and "sbm" can be generated; the others
/// fix the training lambda for externally converted files.
struct DatasetProfile {
  std::string name;
  double lambda = 1.0;
  bool generatable = false;
};

std::optional<DatasetProfile> find_profile(std::string_view name);
std::vector<DatasetProfile> dataset_profiles();

}  // namespace sgdiff

#endif  // SGDIFF_DATASETS_HPP_
