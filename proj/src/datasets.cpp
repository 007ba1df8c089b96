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

#include "sgdiff/datasets.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>

#include "json.hpp"
#include "sgdiff/error.hpp"

namespace sgdiff {

using Json = nlohmann::ordered_json;

void write_dataset(std::ostream& out, const Dataset& data) {
  SGDIFF_REQUIRE(data.names.empty() || data.names.size() == data.graphs.size(),
                 "write_dataset: names must be empty or match the graphs");
  Json header;
  header["format"] = kDatasetFormat;
  header["version"] = kDatasetVersion;
  header["node_classes"] = data.header.node_classes;
  header["edge_classes"] = data.header.edge_classes;
  header["seed"] = data.header.seed;
  header["config_hash"] = data.header.config_hash;
  out << header.dump() << '\n';
  for (std::size_t k = 0; k < data.graphs.size(); ++k) {
    const auto& g = data.graphs[k];
    Json rec;
    rec["n"] = g.num_nodes();
    rec["nodes"] = g.node_labels();
    auto edges = Json::array();
    for (const auto& [i, j] : g.edges()) edges.push_back({i, j});
    rec["edges"] = std::move(edges);
    rec["labels"] = g.edge_labels();
    if (!data.names.empty() && !data.names[k].empty()) rec["name"] = data.names[k];
    out << rec.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write_dataset: stream write failed");
}

namespace {

[[noreturn]] void fail(std::string_view source, int line, const std::string& msg) {
  throw FormatError(std::string(source) + ":" + std::to_string(line) + ": " + msg);
}

void check_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                std::string_view source, int line) {
  for (const auto& [key, value] : obj.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      fail(source, line, "unknown key '" + key + "'");
}

DatasetHeader parse_header(const Json& j, std::string_view source, int line) {
  if (!j.is_object()) fail(source, line, "header is not an object");
  check_keys(j, {"format", "version", "node_classes", "edge_classes", "seed", "config_hash"},
             source, line);
  if (!j.contains("format") || j["format"] != kDatasetFormat)
    fail(source, line, "not an sgdiff-graphs header");
  if (!j.contains("version") || !j["version"].is_number_integer())
    fail(source, line, "header has no version");
  if (j["version"].get<int>() != kDatasetVersion)
    fail(source, line, "unsupported dataset version " + j["version"].dump() + " (expected " +
                           std::to_string(kDatasetVersion) + ")");
  DatasetHeader h;
  h.node_classes = j.at("node_classes").get<int>();
  h.edge_classes = j.at("edge_classes").get<int>();
  if (h.node_classes < 1 || h.edge_classes < 2)
    fail(source, line, "need node_classes >= 1 and edge_classes >= 2");
  if (j.contains("seed")) h.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("config_hash")) h.config_hash = j["config_hash"].get<std::string>();
  return h;
}

}  // namespace

Dataset read_dataset(std::istream& in, std::string_view source) {
  Dataset data;
  bool have_header = false;
  GraphSpec spec;
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j;
    try {
      j = Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(source, line, std::string("malformed JSON: ") + e.what());
    }
    try {
      if (!have_header) {
        data.header = parse_header(j, source, line);
        spec = GraphSpec::uniform(data.header.node_classes, data.header.edge_classes);
        have_header = true;
        continue;
      }
      if (!j.is_object()) fail(source, line, "record is not an object");
      check_keys(j, {"n", "nodes", "edges", "labels", "name"}, source, line);
      const int n = j.at("n").get<int>();
      if (n < 1) fail(source, line, "n must be at least 1");
      auto nodes = j.at("nodes").get<std::vector<int>>();
      if (static_cast<int>(nodes.size()) != n) fail(source, line, "nodes length differs from n");
      const auto& edges = j.at("edges");
      const auto labels = j.at("labels").get<std::vector<int>>();
      if (!edges.is_array() || edges.size() != labels.size())
        fail(source, line, "edges and labels differ in length");
      std::vector<LabeledEdge> raw;
      raw.reserve(labels.size());
      for (std::size_t e = 0; e < labels.size(); ++e) {
        const auto pair = edges[e].get<std::vector<int>>();
        if (pair.size() != 2) fail(source, line, "edge " + std::to_string(e) + " is not a pair");
        raw.push_back({pair[0], pair[1], labels[e]});
      }
      data.graphs.push_back(canonicalize(n, std::move(nodes), raw, spec));
      data.names.push_back(j.contains("name") ? j["name"].get<std::string>() : std::string());
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      fail(source, line, e.what());
    }
  }
  if (!have_header) throw FormatError(std::string(source) + ": no header");
  if (std::all_of(data.names.begin(), data.names.end(),
                  [](const std::string& s) { return s.empty(); }))
    data.names.clear();
  return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_dataset(out, data);
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path.string());
  return read_dataset(in, path.string());
}

std::vector<SparseGraph> gen_er(int count, int n_min, int n_max, double p, Rng& rng) {
  SGDIFF_REQUIRE(p > 0 && p < 1, "gen_er: p must lie in (0, 1)");
  SGDIFF_REQUIRE(n_min >= 1 && n_min <= n_max, "gen_er: need 1 <= n_min <= n_max");
  SGDIFF_REQUIRE(count >= 0, "gen_er: negative count");
  std::vector<SparseGraph> out;
  out.reserve(count);
  for (int g = 0; g < count; ++g) {
    const int n = n_min + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_max - n_min + 1)));
    // Independent Bernoulli slots, drawn as a binomial count plus a uniform
    // subset of that size.
    const std::int64_t pairs = pair_count(n);
    const auto ids = rng.sample_without_replacement(pairs, rng.binomial(pairs, p));
    out.push_back(SparseGraph::from_pair_indices(n, std::vector<int>(n, 0), ids,
                                                 std::vector<int>(ids.size(), 1)));
  }
  return out;
}

void SbmParams::validate() const {
  SGDIFF_REQUIRE(min_blocks >= 1 && min_blocks <= max_blocks, "sbm: invalid block count range");
  SGDIFF_REQUIRE(min_block_size >= 1 && min_block_size <= max_block_size,
                 "sbm: invalid block size range");
  SGDIFF_REQUIRE(p_out >= 0 && p_out < p_in && p_in <= 1, "sbm: need 0 <= p_out < p_in <= 1");
}

std::vector<SbmGraph> gen_sbm_with_blocks(int count, const SbmParams& params, Rng& rng) {
  params.validate();
  SGDIFF_REQUIRE(count >= 0, "gen_sbm: negative count");
  std::vector<SbmGraph> out;
  out.reserve(count);
  auto draw = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  };
  for (int g = 0; g < count; ++g) {
    SbmGraph s;
    const int blocks = draw(params.min_blocks, params.max_blocks);
    for (int b = 0; b < blocks; ++b) {
      const int size = draw(params.min_block_size, params.max_block_size);
      s.block.insert(s.block.end(), size, b);
    }
    const int n = static_cast<int>(s.block.size());
    std::vector<NodePair> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < (s.block[i] == s.block[j] ? params.p_in : params.p_out))
          edges.push_back({i, j});
    const auto m = edges.size();
    s.graph = SparseGraph(n, std::vector<int>(n, 0), std::move(edges), std::vector<int>(m, 1));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<SparseGraph> gen_sbm(int count, const SbmParams& params, Rng& rng) {
  std::vector<SparseGraph> out;
  for (auto& s : gen_sbm_with_blocks(count, params, rng)) out.push_back(std::move(s.graph));
  return out;
}

GraphSpec DatasetStats::spec() const {
  GraphSpec s;
  s.node_classes = static_cast<int>(node_marginals.size());
  s.edge_classes = static_cast<int>(edge_marginals.size());
  s.node_marginals = node_marginals;
  s.edge_marginals = edge_marginals;
  s.validate();
  return s;
}

DatasetStats dataset_stats(std::span<const SparseGraph> graphs, int node_classes,
                           int edge_classes) {
  SGDIFF_REQUIRE(!graphs.empty(), "dataset_stats: empty dataset");
  SGDIFF_REQUIRE(node_classes >= 1 && edge_classes >= 2, "dataset_stats: invalid class counts");
  DatasetStats s;
  s.graph_count = graphs.size();
  s.min_nodes = s.max_nodes = graphs[0].num_nodes();
  s.min_edges = s.max_edges = graphs[0].num_edges();
  s.min_edge_ratio = 1.0;
  s.max_edge_ratio = 0.0;
  bool any_ratio = false;
  std::vector<double> node_counts(node_classes, 0.0), edge_counts(edge_classes, 0.0);
  double total_nodes = 0, total_slots = 0;
  std::map<int, int> hist;
  for (const auto& g : graphs) {
    const int n = g.num_nodes();
    s.min_nodes = std::min(s.min_nodes, n);
    s.max_nodes = std::max(s.max_nodes, n);
    s.min_edges = std::min(s.min_edges, g.num_edges());
    s.max_edges = std::max(s.max_edges, g.num_edges());
    ++hist[n];
    s.node_counts.push_back(n);
    const double slots = static_cast<double>(pair_count(n));
    if (slots > 0) {
      const double ratio = static_cast<double>(g.num_edges()) / slots;
      s.min_edge_ratio = std::min(s.min_edge_ratio, ratio);
      s.max_edge_ratio = std::max(s.max_edge_ratio, ratio);
      any_ratio = true;
    }
    for (int x : g.node_labels()) {
      SGDIFF_REQUIRE(x < node_classes, "dataset_stats: node label out of range");
      node_counts[x] += 1;
    }
    for (int y : g.edge_labels()) {
      SGDIFF_REQUIRE(y < edge_classes, "dataset_stats: edge label out of range");
      edge_counts[y] += 1;
    }
    total_nodes += n;
    total_slots += slots;
  }
  if (!any_ratio) s.min_edge_ratio = 0;
  s.node_count_histogram.assign(hist.begin(), hist.end());
  s.node_marginals.resize(node_classes);
  for (int x = 0; x < node_classes; ++x) s.node_marginals[x] = node_counts[x] / total_nodes;
  s.edge_marginals.assign(edge_classes, 0.0);
  if (total_slots > 0) {
    double existing = 0;
    for (int y = 1; y < edge_classes; ++y) {
      s.edge_marginals[y] = edge_counts[y] / total_slots;
      existing += edge_counts[y];
    }
    s.edge_marginals[0] = 1.0 - existing / total_slots;
  } else {
    s.edge_marginals[0] = 1.0;
  }
  return s;
}

std::vector<DatasetProfile> dataset_profiles() {
  return {{"er", 0.5, true},       {"sbm", 0.25, true},    {"planar", 0.5, false},
          {"ego", 0.10, false},    {"protein", 0.10, false}, {"qm9", 1.0, false},
          {"qm9h", 0.5, false},    {"moses", 0.5, false}};
}

std::optional<DatasetProfile> find_profile(std::string_view name) {
  for (auto& p : dataset_profiles())
    if (p.name == name) return p;
  return std::nullopt;
}

}  // namespace sgdiff
