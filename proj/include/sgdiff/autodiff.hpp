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

#ifndef SGDIFF_AUTODIFF_HPP_
#define SGDIFF_AUTODIFF_HPP_

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace sgdiff::ad {

using Matrix = Eigen::MatrixXd;

/// Handle to a value recorded on a Tape.
struct Var {
  int id = -1;
};

/// Reverse-mode tape over dense double matrices.
///
/// Every op records its output and a closure that pushes the output
/// gradient back to its inputs. Values that do not depend on a parameter
/// carry no gradient and their closures are skipped.
class Tape {
 public:
  Var constant(Matrix value);
  /// Borrowed parameter; `value` must outlive the tape. When `grad_sink` is
  /// non-null, backward() accumulates the parameter gradient into it.
  Var parameter(const Matrix* value, Matrix* grad_sink);

  const Matrix& value(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }
  std::size_t size() const { return nodes_.size(); }

  /// Seeds d(loss)/d(loss) = 1 for a 1x1 value and runs the closures.
  void backward(Var loss);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  /// a + row, the 1 x d row broadcast over the rows of a.
  Var add_row(Var a, Var row);
  Var mul(Var a, Var b);
  Var scale(Var a, double s);
  Var relu(Var a);
  Var broadcast_rows(Var row, int rows);
  Var gather_rows(Var a, std::vector<int> index);
  /// out.row(index[r]) += a.row(r), out has `rows` rows.
  Var scatter_add_rows(Var a, std::vector<int> index, int rows);
  Var concat_cols(const std::vector<Var>& parts);
  /// Row-wise (x - mean) / sqrt(var + eps) * gamma + beta.
  Var layer_norm(Var x, Var gamma, Var beta, double eps = 1e-5);
  /// Per-row dot products of q and k restricted to each of `heads`
  /// contiguous column blocks, times `scale`: E x heads.
  Var head_scores(Var q, Var k, int heads, double scale);
  /// Softmax over the rows that share a segment id, column by column.
  Var segment_softmax(Var scores, std::vector<int> segment, int segments);
  /// out[e, c] = weights[e, head(c)] * values[e, c].
  Var head_mix(Var weights, Var values);
  /// 1 x 4d row: column-wise max, min, mean and standard deviation.
  /// Zero rows give a zero row.
  Var pna_pool(Var x, double eps = 1e-8);
  /// sum_r weight[r] * -log softmax(logits_r)[target[r]], as a 1x1 value.
  Var softmax_cross_entropy(Var logits, std::vector<int> target,
                            std::vector<double> weight);

 private:
  struct Node {
    Matrix own;
    const Matrix* borrowed = nullptr;
    Matrix grad;
    Matrix* sink = nullptr;
    bool requires_grad = false;
    std::function<void(Tape&, const Matrix&)> backward;
  };

  Var push(Matrix value, bool requires_grad,
           std::function<void(Tape&, const Matrix&)> backward);
  /// Gradient buffer of an input, zero-initialized on first use.
  Matrix& grad(Var v);

  std::vector<Node> nodes_;
};

/// Row-wise softmax.
Matrix softmax_rows(const Matrix& logits);

}  // namespace sgdiff::ad

#endif  // SGDIFF_AUTODIFF_HPP_
