// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace gbd {

// Reverse-mode automatic differentiation over dense matrices. Nodes are
// created in topological order; backward() sweeps the tape once in reverse.
// Node ids index into the tape and stay valid until clear().
class Tape {
 public:
  using Matrix = Eigen::MatrixXd;

  // Leaf holding a value whose gradient is wanted (parameters, inputs).
  int leaf(Matrix value);

  int add(int a, int b);
  int sub(int a, int b);
  int mul(int a, int b);  // elementwise
  int matmul(int a, int b);
  int transpose(int a);

  int scale(int a, double s);       // s * X
  int shift(int a, double c);       // X + c
  int add_const(int a, const Matrix& c);
  int sub_const(int a, const Matrix& c);   // X - C
  int rsub_const(int a, const Matrix& c);  // C - X
  int mul_const(int a, const Matrix& c);   // X .* C

  int rowvec_add(int x, int r);  // (N x h) + broadcast (1 x h)
  int slice_entry(int x, int i, int j);  // 1x1 view of one entry
  int scalar_add(int x, int s);  // X + s(0,0)
  int scalar_mul(int x, int s);  // X * s(0,0)

  int sigmoid(int a);
  int tanh(int a);
  int exp(int a);
  int log(int a);
  int lgamma(int a);
  int digamma(int a);

  // Row-wise softmax over active columns; masked rows and columns become 0.
  // An empty mask means all active.
  int softmax_rows(int a, const std::vector<bool>& mask);

  // Row-wise layer normalization with learned gain/bias (1 x h each).
  int layernorm_rows(int x, int gain, int bias, double eps = 1e-5);

  int sum(int a);                               // -> 1x1
  int weighted_sum(int a, const Matrix& w);     // sum(X .* W) -> 1x1
  int concat_cols(const std::vector<int>& parts);

  // Y = sum_c W(row, c) * channels[c]; gradients flow into both the channel
  // matrices and row `row` of the weight node.
  int lincomb_row(const std::vector<int>& channels, int weights, int row);

  const Matrix& value(int id) const { return nodes_[static_cast<std::size_t>(id)].value; }
  const Matrix& grad(int id) const { return nodes_[static_cast<std::size_t>(id)].grad; }

  // Root must be 1x1. Seeds d(root)/d(root) = 1 and accumulates gradients
  // for every node on the tape.
  void backward(int root);

  void clear();
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void()> back;  // empty for leaves
  };

  int push(Matrix value, std::function<void()> back);
  Matrix& grad_ref(int id) { return nodes_[static_cast<std::size_t>(id)].grad; }

  std::vector<Node> nodes_;
};

}  // namespace gbd
