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

#include "sgdiff/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "sgdiff/encodings.hpp"
#include "sgdiff/error.hpp"

namespace sgdiff {

std::vector<int> triangles_per_node(const SparseGraph& g) {
  const auto adj = adjacency_lists(g);
  std::vector<int> tri(g.num_nodes(), 0);
  for (const auto& [i, j] : g.edges()) {
    // Count each triangle once, at its two smallest vertices' edge.
    auto a = std::upper_bound(adj[i].begin(), adj[i].end(), j);
    auto b = std::upper_bound(adj[j].begin(), adj[j].end(), j);
    while (a != adj[i].end() && b != adj[j].end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++tri[i];
        ++tri[j];
        ++tri[*a];
        ++a;
        ++b;
      }
    }
  }
  return tri;
}

std::vector<double> local_clustering(const SparseGraph& g) {
  const auto tri = triangles_per_node(g);
  const auto deg = degrees(g);
  std::vector<double> c(g.num_nodes(), 0.0);
  for (int v = 0; v < g.num_nodes(); ++v)
    if (deg[v] >= 2) c[v] = 2.0 * tri[v] / (static_cast<double>(deg[v]) * (deg[v] - 1));
  return c;
}

int histogram_bin(double x, double lo, double hi, int bins) {
  const double pos = (x - lo) / (hi - lo) * bins;
  return std::clamp(static_cast<int>(std::floor(pos)), 0, bins - 1);
}

GraphDescriptors descriptors(const SparseGraph& g) {
  const int n = g.num_nodes();
  GraphDescriptors d;
  const auto deg = degrees(g);
  const int max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  d.degree.assign(max_deg + 1, 0.0);
  for (int v : deg) d.degree[v] += 1.0 / n;

  d.clustering.assign(kClusteringBins, 0.0);
  for (double c : local_clustering(g))
    d.clustering[histogram_bin(c, 0, 1, kClusteringBins)] += 1.0 / n;

  d.spectral.assign(kSpectralBins, 0.0);
  const auto spectrum = normalized_laplacian_spectrum(g);
  for (Eigen::Index k = 0; k < spectrum.values.size(); ++k)
    d.spectral[histogram_bin(spectrum.values(k), 0, 2, kSpectralBins)] += 1.0 / n;
  return d;
}

double total_variation(const Histogram& p, const Histogram& q) {
  const std::size_t len = std::max(p.size(), q.size());
  double sum = 0;
  for (std::size_t k = 0; k < len; ++k) {
    const double a = k < p.size() ? p[k] : 0.0;
    const double b = k < q.size() ? q[k] : 0.0;
    sum += std::abs(a - b);
  }
  return 0.5 * sum;
}

namespace {

double mean_kernel(std::span<const Histogram> a, std::span<const Histogram> b, double sigma) {
  const double denom = 2.0 * sigma * sigma;
  double sum = 0;
  for (const auto& p : a)
    for (const auto& q : b) {
      const double tv = total_variation(p, q);
      sum += std::exp(-tv * tv / denom);
    }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

}  // namespace

double mmd2(std::span<const Histogram> a, std::span<const Histogram> b, double sigma) {
  SGDIFF_REQUIRE(sigma > 0, "mmd2: sigma must be positive");
  SGDIFF_REQUIRE(!a.empty() && !b.empty(), "mmd2: empty sample set");
  const double value =
      mean_kernel(a, a, sigma) + mean_kernel(b, b, sigma) - 2.0 * mean_kernel(a, b, sigma);
  return std::max(0.0, value);
}

bool is_connected(const SparseGraph& g) {
  const int n = g.num_nodes();
  if (n <= 1) return true;
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  int components = n;
  for (const auto& [i, j] : g.edges()) {
    const int a = find(i), b = find(j);
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

double connectivity_fraction(std::span<const SparseGraph> graphs) {
  SGDIFF_REQUIRE(!graphs.empty(), "connectivity_fraction: empty set");
  const auto connected = std::count_if(graphs.begin(), graphs.end(), is_connected);
  return static_cast<double>(connected) / static_cast<double>(graphs.size());
}

const MetricReport& EvalReport::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.metric == name) return m;
  throw PreconditionError("EvalReport: no metric named " + name);
}

nlohmann::ordered_json EvalReport::to_json() const {
  auto number = [](double v) -> nlohmann::ordered_json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  nlohmann::ordered_json out;
  out["n_generated"] = n_generated;
  out["n_reference"] = n_reference;
  out["repeats"] = repeats;
  auto list = nlohmann::ordered_json::array();
  for (const auto& m : metrics) {
    nlohmann::ordered_json j;
    j["metric"] = m.metric;
    j["mmd2"] = number(m.mmd2);
    j["reference_mmd2"] = number(m.reference_mmd2);
    j["ratio"] = number(m.ratio);
    j["n_generated"] = n_generated;
    j["n_reference"] = n_reference;
    j["repeats"] = repeats;
    j["mean"] = number(m.mean);
    j["std"] = number(m.std);
    list.push_back(std::move(j));
  }
  nlohmann::ordered_json orbit;
  orbit["metric"] = "orbit";
  orbit["status"] = "not computed";
  list.push_back(std::move(orbit));
  out["metrics"] = std::move(list);
  out["connectivity"] = connectivity;
  out["reference_connectivity"] = reference_connectivity;
  return out;
}

namespace {

struct DescriptorSets {
  std::vector<Histogram> degree, clustering, spectral;
};

DescriptorSets describe(std::span<const SparseGraph> graphs) {
  DescriptorSets s;
  for (const auto& g : graphs) {
    auto d = descriptors(g);
    s.degree.push_back(std::move(d.degree));
    s.clustering.push_back(std::move(d.clustering));
    s.spectral.push_back(std::move(d.spectral));
  }
  return s;
}

std::array<double, 3> all_mmd(const DescriptorSets& a, const DescriptorSets& b,
                              const EvalSigmas& sigmas) {
  return {mmd2(a.degree, b.degree, sigmas.degree),
          mmd2(a.clustering, b.clustering, sigmas.clustering),
          mmd2(a.spectral, b.spectral, sigmas.spectral)};
}

}  // namespace

EvalReport evaluate_repeated(const GraphSetSource& source, int repeats,
                             std::span<const SparseGraph> reference,
                             std::span<const SparseGraph> train_reference,
                             const EvalSigmas& sigmas) {
  SGDIFF_REQUIRE(repeats >= 1, "evaluate: repeats must be at least 1");
  SGDIFF_REQUIRE(!reference.empty() && !train_reference.empty(),
                 "evaluate: empty reference set");
  const auto ref = describe(reference);
  const auto baseline = all_mmd(describe(train_reference), ref, sigmas);

  EvalReport report;
  report.repeats = repeats;
  report.n_reference = reference.size();
  report.reference_connectivity = connectivity_fraction(reference);
  const char* names[3] = {"degree", "clustering", "spectral"};
  for (int m = 0; m < 3; ++m) {
    MetricReport r;
    r.metric = names[m];
    r.reference_mmd2 = baseline[m];
    report.metrics.push_back(r);
  }
  for (int rep = 0; rep < repeats; ++rep) {
    const auto generated = source(rep);
    SGDIFF_REQUIRE(!generated.empty(), "evaluate: empty generated set");
    const auto values = all_mmd(describe(generated), ref, sigmas);
    for (int m = 0; m < 3; ++m) report.metrics[m].repeats.push_back(values[m]);
    if (rep == 0) {
      report.n_generated = generated.size();
      report.connectivity = connectivity_fraction(generated);
    }
  }
  for (auto& r : report.metrics) {
    r.mmd2 = r.repeats.front();
    r.ratio = r.reference_mmd2 > 0 ? r.mmd2 / r.reference_mmd2
                                   : std::numeric_limits<double>::quiet_NaN();
    const double count = static_cast<double>(r.repeats.size());
    r.mean = std::accumulate(r.repeats.begin(), r.repeats.end(), 0.0) / count;
    double sq = 0;
    for (double v : r.repeats) sq += (v - r.mean) * (v - r.mean);
    r.std = r.repeats.size() > 1 ? std::sqrt(sq / (count - 1)) : 0.0;
  }
  return report;
}

EvalReport evaluate(std::span<const SparseGraph> generated,
                    std::span<const SparseGraph> reference,
                    std::span<const SparseGraph> train_reference, const EvalSigmas& sigmas) {
  const std::vector<SparseGraph> copy(generated.begin(), generated.end());
  return evaluate_repeated([&copy](int) { return copy; }, 1, reference, train_reference,
                           sigmas);
}

}  // namespace sgdiff
