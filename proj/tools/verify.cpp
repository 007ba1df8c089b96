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

#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/distributions/chi_squared.hpp>

#include "sgdiff/error.hpp"
#include "sgdiff/network.hpp"
#include "sgdiff/noise.hpp"
#include "sgdiff/query.hpp"
#include "sgdiff/rng.hpp"

namespace sgdiff::tools {

using Json = nlohmann::ordered_json;

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

Json VerifyReport::to_json() const {
  Json j;
  j["kind"] = kind;
  j["passed"] = passed();
  auto list = Json::array();
  for (const auto& c : checks) {
    Json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    item["detail"] = c.detail;
    list.push_back(std::move(item));
  }
  j["checks"] = std::move(list);
  return j;
}

std::vector<std::string> verify_kinds() {
  return {"noise", "lemma", "gradcheck", "loss-unbiased", "posterior"};
}

namespace {

// Pearson chi-square p-value; categories with zero expectation must be
// empty.
double chi_square_p(const std::vector<double>& observed, const std::vector<double>& expected) {
  double stat = 0;
  int df = -1;
  for (std::size_t k = 0; k < observed.size(); ++k) {
    if (expected[k] <= 0) {
      if (observed[k] > 0) return 0.0;
      continue;
    }
    stat += (observed[k] - expected[k]) * (observed[k] - expected[k]) / expected[k];
    ++df;
  }
  if (df <= 0) return 1.0;
  return boost::math::cdf(boost::math::complement(boost::math::chi_squared(df), stat));
}

std::vector<double> random_distribution(int size, Rng& rng) {
  std::vector<double> p(size);
  double total = 0;
  for (auto& v : p) total += v = 0.2 + rng.uniform();
  for (auto& v : p) v /= total;
  return p;
}

// Dense cumulative kernel: explicit ordered product of single-step
// matrices.
std::vector<std::vector<double>> dense_cumulative(const NoiseSchedule& s, int t,
                                                  const std::vector<double>& p) {
  const int c = static_cast<int>(p.size());
  std::vector<std::vector<double>> acc(c, std::vector<double>(c, 0.0));
  for (int i = 0; i < c; ++i) acc[i][i] = 1;
  for (int step = 1; step <= t; ++step) {
    const double a = s.alpha(step);
    std::vector<std::vector<double>> next(c, std::vector<double>(c, 0.0));
    for (int i = 0; i < c; ++i)
      for (int k = 0; k < c; ++k)
        for (int j = 0; j < c; ++j)
          next[i][j] += acc[i][k] * ((k == j ? a : 0.0) + (1 - a) * p[j]);
    acc = std::move(next);
  }
  return acc;
}

VerifyReport verify_noise(std::uint64_t seed) {
  VerifyReport report{"noise", {}};
  Rng rng(seed);
  const int n = 6, a = 2, b = 3, steps = 50, draws = 20000;
  GraphSpec spec;
  spec.node_classes = a;
  spec.edge_classes = b;
  spec.node_marginals = random_distribution(a, rng);
  spec.edge_marginals = random_distribution(b, rng);
  const auto schedule = build_schedule(steps, "cosine");

  std::vector<LabeledEdge> raw;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < 0.4) raw.push_back({i, j, 1 + static_cast<int>(rng.below(b - 1))});
  std::vector<int> nodes(n);
  for (auto& x : nodes) x = static_cast<int>(rng.below(a));
  const auto g = canonicalize(n, nodes, raw, spec);

  double worst_matrix = 0;
  for (int t = 1; t <= steps; ++t) {
    const auto q = transition_matrix(schedule, t, spec.edge_marginals, true);
    const auto oracle = dense_cumulative(schedule, t, spec.edge_marginals);
    for (int i = 0; i < b; ++i)
      for (int j = 0; j < b; ++j)
        worst_matrix = std::max(worst_matrix, std::abs(q(i, j) - oracle[i][j]));
  }
  report.checks.push_back({"cumulative matrix equals ordered product", worst_matrix < 1e-10,
                           {{"max_abs_error", worst_matrix}}});

  const std::vector<int> times{1, 10, 25, 50};
  const std::int64_t slots = pair_count(n);
  const int tests = static_cast<int>(times.size()) * (n + static_cast<int>(slots));
  double min_p = 1;
  for (int t : times) {
    const auto qx = dense_cumulative(schedule, t, spec.node_marginals);
    const auto qy = dense_cumulative(schedule, t, spec.edge_marginals);
    std::vector<std::vector<double>> node_obs(n, std::vector<double>(a, 0.0));
    std::vector<std::vector<double>> edge_obs(slots, std::vector<double>(b, 0.0));
    for (int d = 0; d < draws; ++d) {
      const auto noisy = apply_noise(g, t, schedule, spec, rng);
      for (int v = 0; v < n; ++v) node_obs[v][noisy.node_labels()[v]] += 1;
      std::vector<int> seen(slots, 0);
      const auto ids = noisy.pair_indices();
      for (std::size_t e = 0; e < ids.size(); ++e) seen[ids[e]] = noisy.edge_labels()[e];
      for (std::int64_t s = 0; s < slots; ++s) edge_obs[s][seen[s]] += 1;
    }
    for (int v = 0; v < n; ++v) {
      std::vector<double> expected(a);
      for (int c = 0; c < a; ++c) expected[c] = draws * qx[nodes[v]][c];
      min_p = std::min(min_p, chi_square_p(node_obs[v], expected));
    }
    for (std::int64_t s = 0; s < slots; ++s) {
      const auto [i, j] = pair_from_index(s, n);
      std::vector<double> expected(b);
      for (int c = 0; c < b; ++c) expected[c] = draws * qy[g.edge_label(i, j)][c];
      min_p = std::min(min_p, chi_square_p(edge_obs[s], expected));
    }
  }
  const double gate = 0.001 / tests;
  report.checks.push_back({"per-slot chi-square against dense cumulative rows", min_p > gate,
                           {{"min_p", min_p}, {"bonferroni_gate", gate}, {"tests", tests},
                            {"draws", draws}}});
  return report;
}

double log_binomial_tail(int trials, double p, int from) {
  // log P[X >= from], X ~ Binomial(trials, p), by log-sum-exp over terms.
  std::vector<double> terms;
  for (int k = std::max(from, 0); k <= trials; ++k)
    terms.push_back(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) -
                    std::lgamma(trials - k + 1.0) + k * std::log(p) +
                    (trials - k) * std::log1p(-p));
  if (terms.empty()) return -INFINITY;
  const double top = *std::max_element(terms.begin(), terms.end());
  double sum = 0;
  for (double v : terms) sum += std::exp(v - top);
  return top + std::log(sum);
}

VerifyReport verify_lemma(std::uint64_t seed) {
  VerifyReport report{"lemma", {}};
  Rng rng(seed);
  const std::int64_t trials = 1000000;
  struct Case {
    int n;
    double r, k;
  };
  for (const Case c : {Case{20, 0.05, 0.15}, Case{50, 0.05, 0.10}, Case{100, 0.05, 0.08}}) {
    const double bound = lemma_bound({c.n, c.r, c.k});
    const double estimate = lemma_monte_carlo(c.n, c.r, c.k, trials, rng);
    const double log_est = estimate > 0 ? std::log(estimate) : -INFINITY;
    Json detail{{"n", c.n}, {"r", c.r}, {"k", c.k}, {"bound", bound},
                {"monte_carlo", estimate}, {"trials", trials}};
    detail["log_monte_carlo"] = estimate > 0 ? Json(log_est) : Json(nullptr);
    report.checks.push_back({"log tail <= bound (n=" + std::to_string(c.n) + ")",
                             log_est <= bound, detail});
  }
  const int n = 10;
  const double r = 0.05, k = 0.1;
  const int pairs = n * (n - 1) / 2;
  const int from = static_cast<int>(std::ceil(k * pairs - 1e-9));
  const double exact = std::exp(log_binomial_tail(pairs, r, from));
  const double estimate = lemma_monte_carlo(n, r, k, trials, rng);
  const double sigma = std::sqrt(exact * (1 - exact) / trials);
  report.checks.push_back({"Monte Carlo matches exact binomial tail (n=10)",
                           std::abs(estimate - exact) <= 3 * sigma,
                           {{"exact", exact}, {"monte_carlo", estimate}, {"sigma", sigma}}});
  return report;
}

TrainingExample toy_example(const NetworkConfig& cfg, const GraphSpec& spec, Rng& rng) {
  const int n = 5;
  std::vector<LabeledEdge> raw{{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {0, 4, 1}};
  std::vector<int> nodes{0, 1, 0, 1, 1};
  const auto clean = canonicalize(n, nodes, raw, spec);
  const auto schedule = build_schedule(20, "cosine");
  const auto noisy = apply_noise(clean, 10, schedule, spec, rng);
  const auto queries = sample_query_pairs(n, cfg.lambda, rng);
  return make_training_example(clean, noisy, queries, 0.5, cfg, spec);
}

VerifyReport verify_gradcheck(std::uint64_t seed) {
  VerifyReport report{"gradcheck", {}};
  for (auto mode : {DenoiserMode::kTransformer, DenoiserMode::kLinkPrediction}) {
    Rng rng(seed);
    NetworkConfig cfg;
    cfg.layers = 2;
    cfg.node_dim = 16;
    cfg.edge_dim = 8;
    cfg.graph_dim = 8;
    cfg.heads = 4;
    cfg.node_classes = 2;
    cfg.edge_classes = 3;
    cfg.mode = mode;
    cfg.lambda = 0.5;
    // Keeps the loss O(10) so finite-difference round-off stays well below
    // the tolerance.
    cfg.edge_weight = 1.0;
    cfg.encoding.k_eig = 3;
    cfg.encoding.hop_cap = 4;
    GraphSpec spec;
    spec.node_classes = 2;
    spec.edge_classes = 3;
    spec.node_marginals = {0.4, 0.6};
    spec.edge_marginals = {0.6, 0.3, 0.1};
    auto w = init_network(cfg, rng);
    const std::vector<TrainingExample> examples{toy_example(cfg, spec, rng)};
    const auto analytic = compute_gradients(w, examples).gradients;
    const double h = 1e-5;
    double worst = 0;
    std::string worst_name;
    for (std::size_t p = 0; p < w.size(); ++p) {
      auto& tensor = w.tensor(p);
      for (Eigen::Index e = 0; e < tensor.size(); ++e) {
        const double saved = tensor.data()[e];
        tensor.data()[e] = saved + h;
        const double up = evaluate_loss(w, examples);
        tensor.data()[e] = saved - h;
        const double down = evaluate_loss(w, examples);
        tensor.data()[e] = saved;
        const double numeric = (up - down) / (2 * h);
        const double exact = analytic.tensor(p).data()[e];
        const double rel = std::abs(exact - numeric) /
                           std::max({std::abs(exact), std::abs(numeric), 1e-5});
        if (rel > worst) {
          worst = rel;
          worst_name = w.name(p);
        }
      }
    }
    report.checks.push_back({"finite differences (" + std::string(to_string(mode)) + ")",
                             worst < 1e-4,
                             {{"max_relative_error", worst},
                              {"worst_tensor", worst_name},
                              {"parameters", w.parameter_count()}}});
  }
  return report;
}

VerifyReport verify_loss_unbiased(std::uint64_t seed) {
  VerifyReport report{"loss-unbiased", {}};
  Rng rng(seed);
  const int n = 6, a = 2, b = 3, draws = 100000;
  const GraphSpec spec = GraphSpec::uniform(a, b);
  std::vector<LabeledEdge> raw{{0, 1, 1}, {1, 2, 2}, {2, 3, 1}, {3, 4, 2}, {0, 5, 1}};
  const auto clean = canonicalize(n, {0, 1, 0, 1, 1, 0}, raw, spec);
  const std::int64_t slots = pair_count(n);
  Eigen::MatrixXd all_edges(slots, b);
  for (std::int64_t s = 0; s < slots; ++s) {
    const auto d = random_distribution(b, rng);
    for (int c = 0; c < b; ++c) all_edges(s, c) = d[c];
  }
  double dense = 0;
  for (std::int64_t s = 0; s < slots; ++s) {
    const auto [i, j] = pair_from_index(s, n);
    dense -= std::log(all_edges(s, clean.edge_label(i, j)));
  }
  Prediction pred;
  pred.node_probs = Eigen::MatrixXd::Constant(n, a, 1.0 / a);
  for (double lambda : {0.2, 0.5, 1.0}) {
    double sum = 0;
    const int reps = lambda == 1.0 ? 1 : draws;
    for (int d = 0; d < reps; ++d) {
      pred.query_pairs = sample_query_pairs(n, lambda, rng);
      pred.edge_probs.resize(static_cast<Eigen::Index>(pred.query_pairs.size()), b);
      for (std::size_t q = 0; q < pred.query_pairs.size(); ++q)
        pred.edge_probs.row(static_cast<Eigen::Index>(q)) = all_edges.row(pred.query_pairs[q]);
      const auto terms = query_loss(pred, clean, 1.0);
      sum += terms.total - terms.node_term;
    }
    const double mean = sum / reps;
    const double rel = std::abs(mean - dense) / dense;
    const double tol = lambda == 1.0 ? 1e-10 : 0.01;
    report.checks.push_back({"lambda=" + Json(lambda).dump(), rel < tol,
                             {{"dense", dense}, {"mean", mean}, {"relative_error", rel},
                              {"draws", reps}}});
  }
  return report;
}

VerifyReport verify_posterior(std::uint64_t seed) {
  VerifyReport report{"posterior", {}};
  Rng rng(seed);
  const int steps = 8;
  double worst = 0;
  int chains = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int c = 2 + static_cast<int>(rng.below(3));
    std::vector<double> alphas(steps);
    for (auto& a : alphas) a = 0.3 + 0.69 * rng.uniform();
    const auto schedule = NoiseSchedule::from_alphas(alphas);
    const auto p = random_distribution(c, rng);
    for (int k : {2, 4, 8}) {
      for (int t = k; t <= steps; ++t) {
        for (int x0 = 0; x0 < c; ++x0) {
          std::vector<double> delta(c, 0.0);
          delta[x0] = 1;
          for (int zt = 0; zt < c; ++zt) {
            std::vector<double> cur(c, 0.0);
            cur[zt] = 1;
            for (int s = t; s > t - k; --s) {
              std::vector<double> next(c, 0.0);
              for (int i = 0; i < c; ++i) {
                if (cur[i] == 0) continue;
                const auto step = posterior_distribution(i, delta, s, 1, schedule, p);
                for (int j = 0; j < c; ++j) next[j] += cur[i] * step[j];
              }
              cur = std::move(next);
            }
            const auto direct = posterior_distribution(zt, delta, t, k, schedule, p);
            for (int j = 0; j < c; ++j) worst = std::max(worst, std::abs(direct[j] - cur[j]));
            ++chains;
          }
        }
      }
    }
  }
  report.checks.push_back({"k-step posterior equals composed single steps", worst < 1e-10,
                           {{"max_abs_error", worst}, {"cases", chains}}});
  return report;
}

}  // namespace

VerifyReport run_verify(std::string_view kind, std::uint64_t seed) {
  if (kind == "noise") return verify_noise(seed);
  if (kind == "lemma") return verify_lemma(seed);
  if (kind == "gradcheck") return verify_gradcheck(seed);
  if (kind == "loss-unbiased") return verify_loss_unbiased(seed);
  if (kind == "posterior") return verify_posterior(seed);
  throw PreconditionError("verify: unknown kind '" + std::string(kind) + "'");
}

}  // namespace sgdiff::tools
