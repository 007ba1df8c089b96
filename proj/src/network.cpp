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

#include "sgdiff/network.hpp"

#include <cmath>
#include <string>
#include <thread>

#include "sgdiff/autodiff.hpp"
#include "sgdiff/error.hpp"

namespace sgdiff {

using ad::Matrix;
using ad::Tape;
using ad::Var;

std::string_view to_string(DenoiserMode mode) {
  return mode == DenoiserMode::kTransformer ? "transformer" : "link_pred";
}

DenoiserMode denoiser_mode_from_string(std::string_view name) {
  if (name == "transformer") return DenoiserMode::kTransformer;
  if (name == "link_pred") return DenoiserMode::kLinkPrediction;
  throw PreconditionError("unknown denoiser mode '" + std::string(name) + "'");
}

void NetworkConfig::validate() const {
  SGDIFF_REQUIRE(layers >= 1, "NetworkConfig: need at least one layer");
  SGDIFF_REQUIRE(node_dim >= 1 && edge_dim >= 1 && graph_dim >= 1,
                 "NetworkConfig: hidden dimensions must be positive");
  SGDIFF_REQUIRE(heads >= 1 && node_dim % heads == 0,
                 "NetworkConfig: node_dim must be divisible by heads");
  SGDIFF_REQUIRE(node_classes >= 1 && edge_classes >= 2,
                 "NetworkConfig: invalid class counts");
  SGDIFF_REQUIRE(edge_weight >= 0, "NetworkConfig: edge weight c must be nonnegative");
  SGDIFF_REQUIRE(lambda > 0 && lambda <= 1, "NetworkConfig: lambda must lie in (0, 1]");
  encoding.validate();
}

void NetworkWeights::add(std::string name, Eigen::MatrixXd value) {
  for (const auto& existing : names_)
    SGDIFF_REQUIRE(existing != name, "NetworkWeights: duplicate tensor " + name);
  names_.push_back(std::move(name));
  tensors_.push_back(std::move(value));
}

std::size_t NetworkWeights::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < names_.size(); ++k)
    if (names_[k] == name) return k;
  throw PreconditionError("NetworkWeights: no tensor named '" + std::string(name) + "'");
}

std::size_t NetworkWeights::parameter_count() const {
  std::size_t total = 0;
  for (const auto& t : tensors_) total += static_cast<std::size_t>(t.size());
  return total;
}

NetworkWeights NetworkWeights::zeros_like() const {
  NetworkWeights z(config_);
  z.names_ = names_;
  z.tensors_.reserve(tensors_.size());
  for (const auto& t : tensors_) z.tensors_.push_back(Eigen::MatrixXd::Zero(t.rows(), t.cols()));
  return z;
}

bool operator==(const NetworkWeights& a, const NetworkWeights& b) {
  if (!(a.config_ == b.config_) || a.names_ != b.names_) return false;
  for (std::size_t k = 0; k < a.tensors_.size(); ++k) {
    const auto& x = a.tensors_[k];
    const auto& y = b.tensors_[k];
    if (x.rows() != y.rows() || x.cols() != y.cols() || x != y) return false;
  }
  return true;
}

namespace {

struct Shape {
  std::string name;
  int rows;
  int cols;
  int fan_in;  // 0 = layer-norm scale (ones), -1 = layer-norm shift (zeros)
};

void push_mlp(std::vector<Shape>& out, const std::string& prefix, int in, int hidden,
              int width) {
  out.push_back({prefix + ".w1", in, hidden, in});
  out.push_back({prefix + ".b1", 1, hidden, in});
  out.push_back({prefix + ".w2", hidden, width, hidden});
  out.push_back({prefix + ".b2", 1, width, hidden});
}

std::vector<Shape> parameter_layout(const NetworkConfig& c) {
  const int dx = c.node_dim, de = c.edge_dim, dg = c.graph_dim;
  std::vector<Shape> s;
  push_mlp(s, "embed.node", c.node_input_width(), dx, dx);
  push_mlp(s, "embed.edge", c.edge_input_width(), de, de);
  push_mlp(s, "embed.graph", c.graph_input_width(), dg, dg);
  for (int l = 0; l < c.layers; ++l) {
    const std::string p = "layer" + std::to_string(l);
    s.push_back({p + ".attn.wq", dx, dx, dx});
    s.push_back({p + ".attn.wk", dx, dx, dx});
    s.push_back({p + ".attn.wv", dx, dx, dx});
    s.push_back({p + ".attn.we", de, dx, de});
    s.push_back({p + ".attn.we2", de, dx, de});
    s.push_back({p + ".node.film.w1", dg, dx, dg});
    s.push_back({p + ".node.film.w2", dg, dx, dg});
    push_mlp(s, p + ".node.ff", dx, 2 * dx, dx);
    s.push_back({p + ".node.ln.gamma", 1, dx, 0});
    s.push_back({p + ".node.ln.beta", 1, dx, -1});
    s.push_back({p + ".edge.u", dx, de, dx});
    s.push_back({p + ".edge.u2", dx, de, dx});
    s.push_back({p + ".edge.v", de, de, de});
    s.push_back({p + ".edge.film.w1", dg, de, dg});
    s.push_back({p + ".edge.film.w2", dg, de, dg});
    push_mlp(s, p + ".edge.ff", de, 2 * de, de);
    s.push_back({p + ".edge.ln.gamma", 1, de, 0});
    s.push_back({p + ".edge.ln.beta", 1, de, -1});
    s.push_back({p + ".graph.pna_node", 4 * dx, dg, 4 * dx});
    s.push_back({p + ".graph.pna_edge", 4 * de, dg, 4 * de});
    push_mlp(s, p + ".graph.ff", dg, 2 * dg, dg);
  }
  push_mlp(s, "head.node", dx, dx, c.node_classes);
  if (c.mode == DenoiserMode::kTransformer)
    push_mlp(s, "head.edge", de, de, c.edge_classes);
  else
    push_mlp(s, "head.link", 2 * dx, dx, c.edge_classes);
  return s;
}

/// Parameters bound to a tape, looked up by name.
class Binder {
 public:
  Binder(Tape& tape, const NetworkWeights& w, NetworkWeights* grads) : w_(w) {
    vars_.reserve(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
      vars_.push_back(tape.parameter(&w.tensor(k), grads ? &grads->tensor(k) : nullptr));
  }
  Var operator()(std::string_view name) const {
    // Layout order is fixed, so a hinted linear probe from the last hit is
    // almost always immediate.
    const std::size_t count = vars_.size();
    for (std::size_t step = 0; step < count; ++step) {
      const std::size_t k = (cursor_ + step) % count;
      if (w_.name(k) == name) {
        cursor_ = k + 1;
        return vars_[k];
      }
    }
    throw PreconditionError("NetworkWeights: no tensor named '" + std::string(name) + "'");
  }

 private:
  const NetworkWeights& w_;
  std::vector<Var> vars_;
  mutable std::size_t cursor_ = 0;
};

Var linear(Tape& t, const Binder& p, Var in, const std::string& w, const std::string& b) {
  return t.add_row(t.matmul(in, p(w)), p(b));
}

Var mlp(Tape& t, const Binder& p, Var in, const std::string& prefix) {
  Var h = t.relu(linear(t, p, in, prefix + ".w1", prefix + ".b1"));
  return linear(t, p, h, prefix + ".w2", prefix + ".b2");
}

/// FiLM(M1 = graph context, M2 = features) = M1 W1 + (M1 W2) * M2 + M2.
Var film(Tape& t, const Binder& p, Var graph, Var features, const std::string& prefix) {
  const int rows = static_cast<int>(t.value(features).rows());
  Var shift = t.broadcast_rows(t.matmul(graph, p(prefix + ".w1")), rows);
  Var gain = t.broadcast_rows(t.matmul(graph, p(prefix + ".w2")), rows);
  return t.add(t.add(shift, t.mul(gain, features)), features);
}

void check_finite(const Tape& t, Var v, const char* what, int layer) {
  if (!t.value(v).allFinite())
    throw NumericalError(std::string("denoiser: non-finite ") + what + " activation at layer " +
                         std::to_string(layer));
}

Matrix one_hot(std::span<const int> labels, int classes) {
  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (std::size_t r = 0; r < labels.size(); ++r) out(r, labels[r]) = 1.0;
  return out;
}

struct TrunkOutput {
  Var nodes;
  Var edges;
};

TrunkOutput run_trunk(Tape& t, const Binder& p, const NetworkConfig& cfg,
                      const MessageGraph& mg, const EncodedFeatures& enc, double t_norm) {
  const int n = mg.num_nodes;
  const int m = static_cast<int>(mg.num_edges());
  SGDIFF_REQUIRE(enc.node.rows() == n && enc.pair.rows() == m,
                 "denoiser: encodings do not match the message graph");

  Matrix node_in(n, cfg.node_input_width());
  node_in << one_hot(mg.node_labels, cfg.node_classes), enc.node;
  Matrix edge_in(m, cfg.edge_input_width());
  Matrix flags(m, 2);
  for (int e = 0; e < m; ++e) {
    flags(e, 0) = mg.is_noisy[e];
    flags(e, 1) = mg.is_query[e];
  }
  edge_in << one_hot(mg.labels, cfg.edge_classes), flags, enc.pair;
  Matrix graph_in = enc.graph;
  graph_in(0, graph_in.cols() - 1) = t_norm;

  Var x = mlp(t, p, t.constant(std::move(node_in)), "embed.node");
  Var y = mlp(t, p, t.constant(std::move(edge_in)), "embed.edge");
  Var g = mlp(t, p, t.constant(std::move(graph_in)), "embed.graph");

  // Each undirected message edge e = (i, j) carries two directed copies:
  // j -> i at row e and i -> j at row m + e.
  std::vector<int> target(2 * m), source(2 * m), edge_of(2 * m), end_i(m), end_j(m);
  for (int e = 0; e < m; ++e) {
    const auto [i, j] = mg.edges[e];
    target[e] = i;
    source[e] = j;
    target[m + e] = j;
    source[m + e] = i;
    edge_of[e] = edge_of[m + e] = e;
    end_i[e] = i;
    end_j[e] = j;
  }
  const double scale = 1.0 / std::sqrt(static_cast<double>(cfg.node_dim / cfg.heads));

  for (int l = 0; l < cfg.layers; ++l) {
    const std::string pre = "layer" + std::to_string(l);
    Var message;
    if (m > 0) {
      Var q = t.matmul(x, p(pre + ".attn.wq"));
      Var k = t.matmul(x, p(pre + ".attn.wk"));
      Var v = t.matmul(x, p(pre + ".attn.wv"));
      Var ek = t.matmul(y, p(pre + ".attn.we"));
      Var ev = t.matmul(y, p(pre + ".attn.we2"));
      Var keys = t.add(t.gather_rows(k, source), t.gather_rows(ek, edge_of));
      Var scores = t.head_scores(t.gather_rows(q, target), keys, cfg.heads, scale);
      Var attn = t.segment_softmax(scores, target, n);
      Var values = t.add(t.gather_rows(v, source), t.gather_rows(ev, edge_of));
      message = t.scatter_add_rows(t.head_mix(attn, values), target, n);
    } else {
      message = t.constant(Matrix::Zero(n, cfg.node_dim));
    }
    Var x_next = t.layer_norm(t.add(x, mlp(t, p, film(t, p, g, message, pre + ".node.film"),
                                           pre + ".node.ff")),
                              p(pre + ".node.ln.gamma"), p(pre + ".node.ln.beta"));

    Var y_next = y;
    if (m > 0) {
      Var xi = t.gather_rows(x, end_i);
      Var xj = t.gather_rows(x, end_j);
      Var own = t.matmul(y, p(pre + ".edge.v"));
      Var forward_dir = t.add(t.add(t.matmul(xi, p(pre + ".edge.u")),
                                    t.matmul(xj, p(pre + ".edge.u2"))),
                              own);
      Var reverse_dir = t.add(t.add(t.matmul(xj, p(pre + ".edge.u")),
                                    t.matmul(xi, p(pre + ".edge.u2"))),
                              own);
      Var upd_f = mlp(t, p, film(t, p, g, forward_dir, pre + ".edge.film"), pre + ".edge.ff");
      Var upd_r = mlp(t, p, film(t, p, g, reverse_dir, pre + ".edge.film"), pre + ".edge.ff");
      Var update = t.scale(t.add(upd_f, upd_r), 0.5);
      y_next = t.layer_norm(t.add(y, update), p(pre + ".edge.ln.gamma"),
                            p(pre + ".edge.ln.beta"));
    }

    Var pooled = t.matmul(t.pna_pool(x_next), p(pre + ".graph.pna_node"));
    if (m > 0) pooled = t.add(pooled, t.matmul(t.pna_pool(y_next), p(pre + ".graph.pna_edge")));
    g = t.add(g, mlp(t, p, pooled, pre + ".graph.ff"));

    x = x_next;
    y = y_next;
    check_finite(t, x, "node", l);
    check_finite(t, y, "edge", l);
    check_finite(t, g, "graph", l);
  }
  return {x, y};
}

struct HeadOutput {
  Var node_logits;
  Var edge_logits;
};

HeadOutput transformer_heads(Tape& t, const Binder& p, const MessageGraph& mg,
                             const TrunkOutput& trunk) {
  Var node_logits = mlp(t, p, trunk.nodes, "head.node");
  Var query_states = t.gather_rows(trunk.edges, mg.query_positions);
  Var edge_logits = mlp(t, p, query_states, "head.edge");
  return {node_logits, edge_logits};
}

HeadOutput link_heads(Tape& t, const Binder& p, int n, std::span<const PairIndex> queries,
                      Var nodes) {
  std::vector<int> qi, qj;
  qi.reserve(queries.size());
  qj.reserve(queries.size());
  for (PairIndex id : queries) {
    const auto [i, j] = pair_from_index(id, n);
    qi.push_back(i);
    qj.push_back(j);
  }
  Var xi = t.gather_rows(nodes, qi);
  Var xj = t.gather_rows(nodes, qj);
  Var forward_dir = mlp(t, p, t.concat_cols({xi, xj}), "head.link");
  Var reverse_dir = mlp(t, p, t.concat_cols({xj, xi}), "head.link");
  return {mlp(t, p, nodes, "head.node"), t.add(forward_dir, reverse_dir)};
}

HeadOutput run_network(Tape& t, const Binder& p, const NetworkConfig& cfg,
                       const TrainingExample& ex) {
  if (cfg.mode == DenoiserMode::kTransformer) {
    const auto trunk = run_trunk(t, p, cfg, ex.message_graph, ex.encodings, ex.t_norm);
    return transformer_heads(t, p, ex.message_graph, trunk);
  }
  std::vector<PairIndex> queries;
  for (int pos : ex.message_graph.query_positions)
    queries.push_back(ex.message_graph.pair_ids[pos]);
  const auto noisy_mg = build_message_graph(ex.noisy, {});
  EncodedFeatures enc;
  enc.node = ex.encodings.node;
  enc.graph = ex.encodings.graph;
  enc.pair = Matrix(static_cast<Eigen::Index>(noisy_mg.num_edges()), ex.encodings.pair.cols());
  // Pair rows of a link-prediction example follow its message graph, whose
  // noisy edges are a subsequence.
  Eigen::Index r = 0;
  for (std::size_t e = 0; e < ex.message_graph.num_edges(); ++e)
    if (ex.message_graph.is_noisy[e]) enc.pair.row(r++) = ex.encodings.pair.row(e);
  const auto trunk = run_trunk(t, p, cfg, noisy_mg, enc, ex.t_norm);
  return link_heads(t, p, ex.noisy.num_nodes(), queries, trunk.nodes);
}

}  // namespace

NetworkWeights init_network(const NetworkConfig& cfg, Rng& rng) {
  cfg.validate();
  NetworkWeights w(cfg);
  for (const auto& s : parameter_layout(cfg)) {
    Eigen::MatrixXd value(s.rows, s.cols);
    if (s.fan_in == 0) {
      value.setOnes();
    } else if (s.fan_in < 0) {
      value.setZero();
    } else {
      const double bound = 1.0 / std::sqrt(static_cast<double>(s.fan_in));
      // Row-major fill order so the draw sequence matches the checkpoint
      // layout.
      for (int r = 0; r < s.rows; ++r)
        for (int c = 0; c < s.cols; ++c) value(r, c) = (2.0 * rng.uniform() - 1.0) * bound;
    }
    w.add(s.name, std::move(value));
  }
  return w;
}

std::vector<TensorShape> network_layout(const NetworkConfig& cfg) {
  cfg.validate();
  std::vector<TensorShape> out;
  for (const auto& s : parameter_layout(cfg)) out.push_back({s.name, s.rows, s.cols});
  return out;
}

Prediction forward(const NetworkWeights& w, const MessageGraph& mg,
                   const EncodedFeatures& enc, double t_norm) {
  SGDIFF_REQUIRE(w.config().mode == DenoiserMode::kTransformer,
                 "forward: weights are not in transformer mode");
  Tape t;
  Binder p(t, w, nullptr);
  const auto trunk = run_trunk(t, p, w.config(), mg, enc, t_norm);
  const auto heads = transformer_heads(t, p, mg, trunk);
  Prediction pred;
  pred.node_probs = ad::softmax_rows(t.value(heads.node_logits));
  pred.edge_probs = ad::softmax_rows(t.value(heads.edge_logits));
  pred.query_pairs.reserve(mg.num_queries());
  for (int pos : mg.query_positions) pred.query_pairs.push_back(mg.pair_ids[pos]);
  return pred;
}

Eigen::MatrixXd link_pred_node_states(const NetworkWeights& w, const SparseGraph& noisy,
                                      const EncodedFeatures& enc, double t_norm) {
  Tape t;
  Binder p(t, w, nullptr);
  const auto mg = build_message_graph(noisy, {});
  return t.value(run_trunk(t, p, w.config(), mg, enc, t_norm).nodes);
}

Prediction forward_link_pred(const NetworkWeights& w, const SparseGraph& noisy,
                             std::span<const PairIndex> queries,
                             const EncodedFeatures& enc, double t_norm) {
  SGDIFF_REQUIRE(w.config().mode == DenoiserMode::kLinkPrediction,
                 "forward_link_pred: weights are not in link-prediction mode");
  Tape t;
  Binder p(t, w, nullptr);
  const auto mg = build_message_graph(noisy, {});
  const auto trunk = run_trunk(t, p, w.config(), mg, enc, t_norm);
  const auto heads = link_heads(t, p, noisy.num_nodes(), queries, trunk.nodes);
  Prediction pred;
  pred.node_probs = ad::softmax_rows(t.value(heads.node_logits));
  pred.edge_probs = ad::softmax_rows(t.value(heads.edge_logits));
  pred.query_pairs.assign(queries.begin(), queries.end());
  return pred;
}

double edge_term_weight(int num_nodes, std::size_t query_count, double c) {
  if (query_count == 0) return 0.0;
  const double fraction =
      static_cast<double>(query_count) / static_cast<double>(pair_count(num_nodes));
  return c / fraction;
}

LossTerms query_loss(const Prediction& pred, const SparseGraph& clean, double c) {
  const int n = clean.num_nodes();
  SGDIFF_REQUIRE(pred.node_probs.rows() == n, "query_loss: node rows mismatch");
  SGDIFF_REQUIRE(pred.edge_probs.rows() == static_cast<Eigen::Index>(pred.query_pairs.size()),
                 "query_loss: edge rows mismatch");
  LossTerms out;
  auto ce = [&out](double p) {
    if (p < 1e-12) {
      ++out.clamped;
      p = 1e-12;
    }
    return -std::log(p);
  };
  for (int v = 0; v < n; ++v) out.node_term += ce(pred.node_probs(v, clean.node_labels()[v]));
  for (std::size_t q = 0; q < pred.query_pairs.size(); ++q) {
    const auto [i, j] = pair_from_index(pred.query_pairs[q], n);
    out.edge_term += ce(pred.edge_probs(static_cast<Eigen::Index>(q), clean.edge_label(i, j)));
  }
  out.total =
      out.node_term + edge_term_weight(n, pred.query_pairs.size(), c) * out.edge_term;
  return out;
}

TrainingExample make_training_example(const SparseGraph& clean, const SparseGraph& noisy,
                                      std::span<const PairIndex> queries, double t_norm,
                                      const NetworkConfig& cfg, const GraphSpec& spec) {
  SGDIFF_REQUIRE(clean.num_nodes() == noisy.num_nodes(),
                 "make_training_example: node count mismatch");
  TrainingExample ex;
  ex.message_graph = build_message_graph(noisy, queries);
  ex.noisy = noisy;
  ex.encodings = compute_encodings(noisy, ex.message_graph.pair_ids, cfg.encoding, spec);
  ex.encodings.set_timestep(t_norm);
  ex.t_norm = t_norm;
  ex.node_targets = clean.node_labels();
  ex.edge_targets.reserve(queries.size());
  const int n = clean.num_nodes();
  for (PairIndex id : queries) {
    const auto [i, j] = pair_from_index(id, n);
    ex.edge_targets.push_back(clean.edge_label(i, j));
  }
  ex.edge_weight = edge_term_weight(n, queries.size(), cfg.edge_weight);
  return ex;
}

namespace {

struct ExampleTerms {
  double node = 0;
  double edge = 0;
};

ExampleTerms example_loss(const NetworkWeights& w, const TrainingExample& ex,
                          NetworkWeights* grads, double loss_scale) {
  Tape t;
  Binder p(t, w, grads);
  const auto heads = run_network(t, p, w.config(), ex);
  Var node_loss = t.softmax_cross_entropy(
      heads.node_logits, ex.node_targets, std::vector<double>(ex.node_targets.size(), 1.0));
  Var edge_loss = t.softmax_cross_entropy(heads.edge_logits, ex.edge_targets,
                                          std::vector<double>(ex.edge_targets.size(), 1.0));
  Var total = t.scale(t.add(node_loss, t.scale(edge_loss, ex.edge_weight)), loss_scale);
  if (grads) t.backward(total);
  return {t.value(node_loss)(0, 0), t.value(edge_loss)(0, 0)};
}

}  // namespace

GradientResult compute_gradients(const NetworkWeights& w,
                                 std::span<const TrainingExample> examples, int workers) {
  SGDIFF_REQUIRE(!examples.empty(), "compute_gradients: empty batch");
  const std::size_t count = examples.size();
  const double scale = 1.0 / static_cast<double>(count);
  std::vector<NetworkWeights> per_example(count);
  std::vector<ExampleTerms> terms(count);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      per_example[k] = w.zeros_like();
      terms[k] = example_loss(w, examples[k], &per_example[k], scale);
    }
  };
  const std::size_t threads =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers), count));
  if (threads == 1) {
    run_range(0, count);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (count + threads - 1) / threads;
    for (std::size_t b = 0; b < count; b += chunk)
      pool.emplace_back(run_range, b, std::min(count, b + chunk));
    for (auto& th : pool) th.join();
  }

  GradientResult out;
  out.gradients = std::move(per_example[0]);
  for (std::size_t k = 1; k < count; ++k)
    for (std::size_t p = 0; p < out.gradients.size(); ++p)
      out.gradients.tensor(p) += per_example[k].tensor(p);
  for (std::size_t k = 0; k < count; ++k) {
    out.node_term += terms[k].node * scale;
    out.edge_term += terms[k].edge * examples[k].edge_weight * scale;
  }
  out.loss = out.node_term + out.edge_term;
  for (std::size_t p = 0; p < out.gradients.size(); ++p)
    if (!out.gradients.tensor(p).allFinite())
      throw NumericalError("compute_gradients: non-finite gradient in " +
                           out.gradients.name(p));
  return out;
}

double evaluate_loss(const NetworkWeights& w, std::span<const TrainingExample> examples) {
  SGDIFF_REQUIRE(!examples.empty(), "evaluate_loss: empty batch");
  double total = 0;
  for (const auto& ex : examples) {
    const auto terms = example_loss(w, ex, nullptr, 1.0);
    total += terms.node + ex.edge_weight * terms.edge;
  }
  return total / static_cast<double>(examples.size());
}

}  // namespace sgdiff
