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

#include "sgdiff/autodiff.hpp"

#include <cmath>
#include <limits>

#include "sgdiff/error.hpp"

namespace sgdiff::ad {

Var Tape::push(Matrix value, bool requires_grad,
               std::function<void(Tape&, const Matrix&)> backward) {
  Node node;
  node.own = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

Matrix& Tape::grad(Var v) {
  Node& node = nodes_[v.id];
  if (node.grad.size() == 0) {
    const Matrix& val = value(v);
    node.grad = Matrix::Zero(val.rows(), val.cols());
  }
  return node.grad;
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::parameter(const Matrix* value, Matrix* grad_sink) {
  Node node;
  node.borrowed = value;
  node.sink = grad_sink;
  node.requires_grad = grad_sink != nullptr;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size() - 1)};
}

const Matrix& Tape::value(Var v) const {
  const Node& node = nodes_[v.id];
  return node.borrowed ? *node.borrowed : node.own;
}

void Tape::backward(Var loss) {
  SGDIFF_REQUIRE(value(loss).size() == 1, "Tape::backward: loss must be 1x1");
  if (!nodes_[loss.id].requires_grad) return;
  grad(loss)(0, 0) = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node& node = nodes_[id];
    if (node.grad.size() == 0) continue;
    if (node.backward) node.backward(*this, node.grad);
    if (node.sink) {
      if (node.sink->size() == 0) *node.sink = Matrix::Zero(node.grad.rows(), node.grad.cols());
      *node.sink += node.grad;
    }
  }
}

Var Tape::matmul(Var a, Var b) {
  SGDIFF_REQUIRE(value(a).cols() == value(b).rows(), "matmul: shape mismatch");
  return push(value(a) * value(b), requires_grad(a) || requires_grad(b),
              [a, b](Tape& t, const Matrix& g) {
                if (t.requires_grad(a)) t.grad(a).noalias() += g * t.value(b).transpose();
                if (t.requires_grad(b)) t.grad(b).noalias() += t.value(a).transpose() * g;
              });
}

Var Tape::add(Var a, Var b) {
  SGDIFF_REQUIRE(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
                 "add: shape mismatch");
  return push(value(a) + value(b), requires_grad(a) || requires_grad(b),
              [a, b](Tape& t, const Matrix& g) {
                if (t.requires_grad(a)) t.grad(a) += g;
                if (t.requires_grad(b)) t.grad(b) += g;
              });
}

Var Tape::add_row(Var a, Var row) {
  SGDIFF_REQUIRE(value(row).rows() == 1 && value(row).cols() == value(a).cols(),
                 "add_row: shape mismatch");
  Matrix out = value(a);
  out.rowwise() += value(row).row(0);
  return push(std::move(out), requires_grad(a) || requires_grad(row),
              [a, row](Tape& t, const Matrix& g) {
                if (t.requires_grad(a)) t.grad(a) += g;
                if (t.requires_grad(row)) t.grad(row) += g.colwise().sum();
              });
}

Var Tape::mul(Var a, Var b) {
  SGDIFF_REQUIRE(value(a).rows() == value(b).rows() && value(a).cols() == value(b).cols(),
                 "mul: shape mismatch");
  return push(value(a).cwiseProduct(value(b)), requires_grad(a) || requires_grad(b),
              [a, b](Tape& t, const Matrix& g) {
                if (t.requires_grad(a)) t.grad(a) += g.cwiseProduct(t.value(b));
                if (t.requires_grad(b)) t.grad(b) += g.cwiseProduct(t.value(a));
              });
}

Var Tape::scale(Var a, double s) {
  return push(value(a) * s, requires_grad(a),
              [a, s](Tape& t, const Matrix& g) { t.grad(a) += s * g; });
}

Var Tape::relu(Var a) {
  return push(value(a).cwiseMax(0.0), requires_grad(a), [a](Tape& t, const Matrix& g) {
    t.grad(a) += (t.value(a).array() > 0).select(g, 0.0);
  });
}

Var Tape::broadcast_rows(Var row, int rows) {
  SGDIFF_REQUIRE(value(row).rows() == 1, "broadcast_rows: expected a row");
  Matrix out = value(row).replicate(rows, 1);
  return push(std::move(out), requires_grad(row), [row](Tape& t, const Matrix& g) {
    t.grad(row) += g.colwise().sum();
  });
}

Var Tape::gather_rows(Var a, std::vector<int> index) {
  const Matrix& src = value(a);
  Matrix out(static_cast<Eigen::Index>(index.size()), src.cols());
  for (std::size_t r = 0; r < index.size(); ++r) out.row(r) = src.row(index[r]);
  return push(std::move(out), requires_grad(a),
              [a, index = std::move(index)](Tape& t, const Matrix& g) {
                Matrix& ga = t.grad(a);
                for (std::size_t r = 0; r < index.size(); ++r) ga.row(index[r]) += g.row(r);
              });
}

Var Tape::scatter_add_rows(Var a, std::vector<int> index, int rows) {
  const Matrix& src = value(a);
  SGDIFF_REQUIRE(static_cast<Eigen::Index>(index.size()) == src.rows(),
                 "scatter_add_rows: index length mismatch");
  Matrix out = Matrix::Zero(rows, src.cols());
  for (std::size_t r = 0; r < index.size(); ++r) out.row(index[r]) += src.row(r);
  return push(std::move(out), requires_grad(a),
              [a, index = std::move(index)](Tape& t, const Matrix& g) {
                Matrix& ga = t.grad(a);
                for (std::size_t r = 0; r < index.size(); ++r) ga.row(r) += g.row(index[r]);
              });
}

Var Tape::concat_cols(const std::vector<Var>& parts) {
  SGDIFF_REQUIRE(!parts.empty(), "concat_cols: no inputs");
  const Eigen::Index rows = value(parts[0]).rows();
  Eigen::Index cols = 0;
  bool needs = false;
  for (Var p : parts) {
    SGDIFF_REQUIRE(value(p).rows() == rows, "concat_cols: row count mismatch");
    cols += value(p).cols();
    needs = needs || requires_grad(p);
  }
  Matrix out(rows, cols);
  Eigen::Index c = 0;
  for (Var p : parts) {
    out.middleCols(c, value(p).cols()) = value(p);
    c += value(p).cols();
  }
  return push(std::move(out), needs, [parts](Tape& t, const Matrix& g) {
    Eigen::Index c = 0;
    for (Var p : parts) {
      const Eigen::Index w = t.value(p).cols();
      if (t.requires_grad(p)) t.grad(p) += g.middleCols(c, w);
      c += w;
    }
  });
}

Var Tape::layer_norm(Var x, Var gamma, Var beta, double eps) {
  const Matrix& in = value(x);
  const Eigen::Index d = in.cols();
  SGDIFF_REQUIRE(value(gamma).cols() == d && value(beta).cols() == d,
                 "layer_norm: parameter width mismatch");
  Matrix normalized(in.rows(), d);
  Eigen::VectorXd inv_std(in.rows());
  for (Eigen::Index r = 0; r < in.rows(); ++r) {
    const double mean = in.row(r).mean();
    const double var = (in.row(r).array() - mean).square().mean();
    inv_std(r) = 1.0 / std::sqrt(var + eps);
    normalized.row(r) = (in.row(r).array() - mean) * inv_std(r);
  }
  Matrix out = normalized.array().rowwise() * value(gamma).row(0).array();
  out.rowwise() += value(beta).row(0);
  const bool needs = requires_grad(x) || requires_grad(gamma) || requires_grad(beta);
  return push(std::move(out), needs,
              [x, gamma, beta, normalized = std::move(normalized),
               inv_std = std::move(inv_std)](Tape& t, const Matrix& g) {
                if (t.requires_grad(gamma))
                  t.grad(gamma) += g.cwiseProduct(normalized).colwise().sum();
                if (t.requires_grad(beta)) t.grad(beta) += g.colwise().sum();
                if (!t.requires_grad(x)) return;
                const Matrix gn = g.array().rowwise() * t.value(gamma).row(0).array();
                Matrix& gx = t.grad(x);
                for (Eigen::Index r = 0; r < gn.rows(); ++r) {
                  const double m1 = gn.row(r).mean();
                  const double m2 = gn.row(r).cwiseProduct(normalized.row(r)).mean();
                  gx.row(r).array() += inv_std(r) * (gn.row(r).array() - m1 -
                                                     normalized.row(r).array() * m2);
                }
              });
}

Var Tape::head_scores(Var q, Var k, int heads, double scale) {
  const Matrix& qv = value(q);
  const Matrix& kv = value(k);
  SGDIFF_REQUIRE(qv.rows() == kv.rows() && qv.cols() == kv.cols() && qv.cols() % heads == 0,
                 "head_scores: shape mismatch");
  const Eigen::Index width = qv.cols() / heads;
  Matrix out(qv.rows(), heads);
  for (int h = 0; h < heads; ++h)
    out.col(h) = scale * qv.middleCols(h * width, width)
                             .cwiseProduct(kv.middleCols(h * width, width))
                             .rowwise()
                             .sum();
  return push(std::move(out), requires_grad(q) || requires_grad(k),
              [q, k, heads, scale, width](Tape& t, const Matrix& g) {
                for (int h = 0; h < heads; ++h) {
                  const auto gh = (scale * g.col(h)).eval();
                  if (t.requires_grad(q))
                    t.grad(q).middleCols(h * width, width).array() +=
                        t.value(k).middleCols(h * width, width).array().colwise() *
                        gh.array();
                  if (t.requires_grad(k))
                    t.grad(k).middleCols(h * width, width).array() +=
                        t.value(q).middleCols(h * width, width).array().colwise() *
                        gh.array();
                }
              });
}

Var Tape::segment_softmax(Var scores, std::vector<int> segment, int segments) {
  const Matrix& s = value(scores);
  SGDIFF_REQUIRE(static_cast<Eigen::Index>(segment.size()) == s.rows(),
                 "segment_softmax: segment length mismatch");
  const Eigen::Index cols = s.cols();
  Matrix seg_max = Matrix::Constant(segments, cols, -std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < segment.size(); ++r)
    seg_max.row(segment[r]) = seg_max.row(segment[r]).cwiseMax(s.row(r));
  Matrix out(s.rows(), cols);
  Matrix seg_sum = Matrix::Zero(segments, cols);
  for (std::size_t r = 0; r < segment.size(); ++r) {
    out.row(r) = (s.row(r) - seg_max.row(segment[r])).array().exp();
    seg_sum.row(segment[r]) += out.row(r);
  }
  for (std::size_t r = 0; r < segment.size(); ++r)
    out.row(r).array() /= seg_sum.row(segment[r]).array();
  Matrix saved = out;
  return push(std::move(out), requires_grad(scores),
              [scores, segment = std::move(segment), segments,
               alpha = std::move(saved)](Tape& t, const Matrix& g) {
                Matrix dot = Matrix::Zero(segments, alpha.cols());
                for (std::size_t r = 0; r < segment.size(); ++r)
                  dot.row(segment[r]) += alpha.row(r).cwiseProduct(g.row(r));
                Matrix& gs = t.grad(scores);
                for (std::size_t r = 0; r < segment.size(); ++r)
                  gs.row(r) += alpha.row(r).cwiseProduct(g.row(r) - dot.row(segment[r]));
              });
}

Var Tape::head_mix(Var weights, Var values) {
  const Matrix& w = value(weights);
  const Matrix& v = value(values);
  SGDIFF_REQUIRE(w.rows() == v.rows() && v.cols() % w.cols() == 0,
                 "head_mix: shape mismatch");
  const Eigen::Index heads = w.cols();
  const Eigen::Index width = v.cols() / heads;
  Matrix out(v.rows(), v.cols());
  for (Eigen::Index h = 0; h < heads; ++h)
    out.middleCols(h * width, width) =
        v.middleCols(h * width, width).array().colwise() * w.col(h).array();
  return push(std::move(out), requires_grad(weights) || requires_grad(values),
              [weights, values, heads, width](Tape& t, const Matrix& g) {
                for (Eigen::Index h = 0; h < heads; ++h) {
                  if (t.requires_grad(weights))
                    t.grad(weights).col(h) += g.middleCols(h * width, width)
                                                  .cwiseProduct(t.value(values).middleCols(
                                                      h * width, width))
                                                  .rowwise()
                                                  .sum();
                  if (t.requires_grad(values))
                    t.grad(values).middleCols(h * width, width).array() +=
                        g.middleCols(h * width, width).array().colwise() *
                        t.value(weights).col(h).array();
                }
              });
}

Var Tape::pna_pool(Var x, double eps) {
  const Matrix& in = value(x);
  const Eigen::Index rows = in.rows(), d = in.cols();
  Matrix out = Matrix::Zero(1, 4 * d);
  if (rows == 0) return constant(std::move(out));
  std::vector<Eigen::Index> arg_max(d), arg_min(d);
  Eigen::RowVectorXd mean = in.colwise().mean();
  Eigen::RowVectorXd stdev(d);
  for (Eigen::Index c = 0; c < d; ++c) {
    out(0, c) = in.col(c).maxCoeff(&arg_max[c]);
    out(0, d + c) = in.col(c).minCoeff(&arg_min[c]);
    out(0, 2 * d + c) = mean(c);
    stdev(c) = std::sqrt((in.col(c).array() - mean(c)).square().mean() + eps);
    out(0, 3 * d + c) = stdev(c);
  }
  return push(std::move(out), requires_grad(x),
              [x, arg_max = std::move(arg_max), arg_min = std::move(arg_min),
               mean = std::move(mean), stdev = std::move(stdev)](Tape& t, const Matrix& g) {
                const Matrix& in = t.value(x);
                const Eigen::Index rows = in.rows(), d = in.cols();
                Matrix& gx = t.grad(x);
                for (Eigen::Index c = 0; c < d; ++c) {
                  gx(arg_max[c], c) += g(0, c);
                  gx(arg_min[c], c) += g(0, d + c);
                  gx.col(c).array() += g(0, 2 * d + c) / static_cast<double>(rows);
                  gx.col(c).array() += g(0, 3 * d + c) * (in.col(c).array() - mean(c)) /
                                       (static_cast<double>(rows) * stdev(c));
                }
              });
}

Var Tape::softmax_cross_entropy(Var logits, std::vector<int> target,
                                std::vector<double> weight) {
  const Matrix& z = value(logits);
  SGDIFF_REQUIRE(static_cast<Eigen::Index>(target.size()) == z.rows() &&
                     target.size() == weight.size(),
                 "softmax_cross_entropy: length mismatch");
  Matrix probs = softmax_rows(z);
  double total = 0;
  for (Eigen::Index r = 0; r < z.rows(); ++r) {
    const double row_max = z.row(r).maxCoeff();
    const double lse = row_max + std::log((z.row(r).array() - row_max).exp().sum());
    total += weight[r] * (lse - z(r, target[r]));
  }
  Matrix out(1, 1);
  out(0, 0) = total;
  return push(std::move(out), requires_grad(logits),
              [logits, target = std::move(target), weight = std::move(weight),
               probs = std::move(probs)](Tape& t, const Matrix& g) {
                Matrix& gz = t.grad(logits);
                for (Eigen::Index r = 0; r < probs.rows(); ++r) {
                  Eigen::RowVectorXd d = probs.row(r);
                  d(target[r]) -= 1.0;
                  gz.row(r) += g(0, 0) * weight[r] * d;
                }
              });
}

Matrix softmax_rows(const Matrix& logits) {
  Matrix out(logits.rows(), logits.cols());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const double row_max = logits.row(r).maxCoeff();
    out.row(r) = (logits.row(r).array() - row_max).exp();
    out.row(r) /= out.row(r).sum();
  }
  return out;
}

}  // namespace sgdiff::ad
