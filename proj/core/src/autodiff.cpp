// SPDX-License-Identifier: Apache-2.0
#include "gbd/autodiff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbd/errors.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

int Tape::push(Matrix value, std::function<void()> back) {
  Node node;
  node.grad = Matrix::Zero(value.rows(), value.cols());
  node.value = std::move(value);
  node.back = std::move(back);
  nodes_.push_back(std::move(node));
  return static_cast<int>(nodes_.size()) - 1;
}

int Tape::leaf(Matrix value) { return push(std::move(value), {}); }

int Tape::add(int a, int b) {
  int id = push(value(a) + value(b), {});
  nodes_.back().back = [this, a, b, id] {
    grad_ref(a) += grad(id);
    grad_ref(b) += grad(id);
  };
  return id;
}

int Tape::sub(int a, int b) {
  int id = push(value(a) - value(b), {});
  nodes_.back().back = [this, a, b, id] {
    grad_ref(a) += grad(id);
    grad_ref(b) -= grad(id);
  };
  return id;
}

int Tape::mul(int a, int b) {
  int id = push(value(a).cwiseProduct(value(b)), {});
  nodes_.back().back = [this, a, b, id] {
    grad_ref(a) += grad(id).cwiseProduct(value(b));
    grad_ref(b) += grad(id).cwiseProduct(value(a));
  };
  return id;
}

int Tape::matmul(int a, int b) {
  int id = push(value(a) * value(b), {});
  nodes_.back().back = [this, a, b, id] {
    grad_ref(a) += grad(id) * value(b).transpose();
    grad_ref(b) += value(a).transpose() * grad(id);
  };
  return id;
}

int Tape::transpose(int a) {
  int id = push(value(a).transpose(), {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id).transpose(); };
  return id;
}

int Tape::scale(int a, double s) {
  int id = push(s * value(a), {});
  nodes_.back().back = [this, a, s, id] { grad_ref(a) += s * grad(id); };
  return id;
}

int Tape::shift(int a, double c) {
  int id = push(value(a).array() + c, {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id); };
  return id;
}

int Tape::add_const(int a, const Matrix& c) {
  int id = push(value(a) + c, {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id); };
  return id;
}

int Tape::sub_const(int a, const Matrix& c) {
  int id = push(value(a) - c, {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id); };
  return id;
}

int Tape::rsub_const(int a, const Matrix& c) {
  int id = push(c - value(a), {});
  nodes_.back().back = [this, a, id] { grad_ref(a) -= grad(id); };
  return id;
}

int Tape::mul_const(int a, const Matrix& c) {
  Matrix copy = c;
  int id = push(value(a).cwiseProduct(c), {});
  nodes_.back().back = [this, a, id, copy = std::move(copy)] {
    grad_ref(a) += grad(id).cwiseProduct(copy);
  };
  return id;
}

int Tape::rowvec_add(int x, int r) {
  if (value(r).rows() != 1 || value(r).cols() != value(x).cols()) {
    throw ConfigError("rowvec_add: broadcast operand must be 1 x cols(x)");
  }
  int id = push(value(x).rowwise() + value(r).row(0), {});
  nodes_.back().back = [this, x, r, id] {
    grad_ref(x) += grad(id);
    grad_ref(r).row(0) += grad(id).colwise().sum();
  };
  return id;
}

int Tape::slice_entry(int x, int i, int j) {
  Matrix v(1, 1);
  v(0, 0) = value(x)(i, j);
  int id = push(std::move(v), {});
  nodes_.back().back = [this, x, i, j, id] { grad_ref(x)(i, j) += grad(id)(0, 0); };
  return id;
}

int Tape::scalar_add(int x, int s) {
  int id = push(value(x).array() + value(s)(0, 0), {});
  nodes_.back().back = [this, x, s, id] {
    grad_ref(x) += grad(id);
    grad_ref(s)(0, 0) += grad(id).sum();
  };
  return id;
}

int Tape::scalar_mul(int x, int s) {
  int id = push(value(x) * value(s)(0, 0), {});
  nodes_.back().back = [this, x, s, id] {
    grad_ref(x) += value(s)(0, 0) * grad(id);
    grad_ref(s)(0, 0) += grad(id).cwiseProduct(value(x)).sum();
  };
  return id;
}

int Tape::sigmoid(int a) {
  int id = push(value(a).unaryExpr([](double z) { return gbd::sigmoid(z); }), {});
  nodes_.back().back = [this, a, id] {
    const Matrix& y = value(id);
    grad_ref(a) += grad(id).cwiseProduct(y.cwiseProduct(Matrix::Ones(y.rows(), y.cols()) - y));
  };
  return id;
}

int Tape::tanh(int a) {
  int id = push(value(a).array().tanh(), {});
  nodes_.back().back = [this, a, id] {
    const Matrix& y = value(id);
    grad_ref(a) += grad(id).cwiseProduct((1.0 - y.array().square()).matrix());
  };
  return id;
}

int Tape::exp(int a) {
  int id = push(value(a).array().exp(), {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id).cwiseProduct(value(id)); };
  return id;
}

int Tape::log(int a) {
  int id = push(value(a).array().log(), {});
  nodes_.back().back = [this, a, id] { grad_ref(a) += grad(id).cwiseQuotient(value(a)); };
  return id;
}

int Tape::lgamma(int a) {
  int id = push(value(a).unaryExpr([](double z) { return gbd::log_gamma(z); }), {});
  nodes_.back().back = [this, a, id] {
    grad_ref(a) += grad(id).cwiseProduct(
        value(a).unaryExpr([](double z) { return gbd::digamma(z); }));
  };
  return id;
}

int Tape::digamma(int a) {
  int id = push(value(a).unaryExpr([](double z) { return gbd::digamma(z); }), {});
  nodes_.back().back = [this, a, id] {
    grad_ref(a) += grad(id).cwiseProduct(
        value(a).unaryExpr([](double z) { return gbd::trigamma(z); }));
  };
  return id;
}

int Tape::softmax_rows(int a, const std::vector<bool>& mask) {
  const Matrix& s = value(a);
  const int n = static_cast<int>(s.rows());
  const int m = static_cast<int>(s.cols());
  auto active = [&mask](int i) { return mask.empty() || mask[static_cast<std::size_t>(i)]; };
  Matrix p = Matrix::Zero(n, m);
  for (int i = 0; i < n; ++i) {
    if (!active(i)) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < m; ++j) {
      if (active(j)) best = std::max(best, s(i, j));
    }
    double denom = 0.0;
    for (int j = 0; j < m; ++j) {
      if (!active(j)) continue;
      p(i, j) = std::exp(s(i, j) - best);
      denom += p(i, j);
    }
    p.row(i) /= denom;
  }
  int id = push(std::move(p), {});
  nodes_.back().back = [this, a, id, mask] {
    const Matrix& pv = value(id);
    const Matrix& g = grad(id);
    auto active = [&mask](int i) { return mask.empty() || mask[static_cast<std::size_t>(i)]; };
    Matrix& ga = grad_ref(a);
    for (int i = 0; i < pv.rows(); ++i) {
      if (!active(i)) continue;
      const double dot = g.row(i).dot(pv.row(i));
      for (int j = 0; j < pv.cols(); ++j) {
        if (!active(static_cast<int>(j))) continue;
        ga(i, j) += pv(i, j) * (g(i, j) - dot);
      }
    }
  };
  return id;
}

int Tape::layernorm_rows(int x, int gain, int bias, double eps) {
  const Matrix& xv = value(x);
  const int n = static_cast<int>(xv.rows());
  const int h = static_cast<int>(xv.cols());
  if (value(gain).rows() != 1 || value(gain).cols() != h || value(bias).rows() != 1 ||
      value(bias).cols() != h) {
    throw ConfigError("layernorm_rows: gain/bias must be 1 x cols(x)");
  }
  Matrix xhat(n, h);
  Eigen::VectorXd inv_std(n);
  for (int i = 0; i < n; ++i) {
    const double mu = xv.row(i).mean();
    const double var = (xv.row(i).array() - mu).square().mean();
    inv_std(i) = 1.0 / std::sqrt(var + eps);
    xhat.row(i) = (xv.row(i).array() - mu) * inv_std(i);
  }
  Matrix out = (xhat.array().rowwise() * value(gain).row(0).array()).rowwise() +
               value(bias).row(0).array();
  int id = push(std::move(out), {});
  nodes_.back().back = [this, x, gain, bias, id, xhat = std::move(xhat),
                        inv_std = std::move(inv_std)] {
    const Matrix& g = grad(id);
    const int rows = static_cast<int>(g.rows());
    grad_ref(bias).row(0) += g.colwise().sum();
    grad_ref(gain).row(0) += g.cwiseProduct(xhat).colwise().sum();
    Matrix& gx = grad_ref(x);
    const auto& gw = value(gain).row(0);
    for (int i = 0; i < rows; ++i) {
      // dxhat = g .* gain; dx = (dxhat - mean(dxhat) - xhat * mean(dxhat .* xhat)) * inv_std
      Eigen::RowVectorXd dxhat = g.row(i).cwiseProduct(gw);
      const double m1 = dxhat.mean();
      const double m2 = dxhat.cwiseProduct(xhat.row(i)).mean();
      gx.row(i) += ((dxhat.array() - m1 - xhat.row(i).array() * m2) * inv_std(i)).matrix();
    }
  };
  return id;
}

int Tape::sum(int a) {
  Matrix v(1, 1);
  v(0, 0) = value(a).sum();
  int id = push(std::move(v), {});
  nodes_.back().back = [this, a, id] {
    grad_ref(a).array() += grad(id)(0, 0);
  };
  return id;
}

int Tape::weighted_sum(int a, const Matrix& w) {
  if (w.rows() != value(a).rows() || w.cols() != value(a).cols()) {
    throw ConfigError("weighted_sum: weight shape mismatch");
  }
  Matrix v(1, 1);
  v(0, 0) = value(a).cwiseProduct(w).sum();
  Matrix wc = w;
  int id = push(std::move(v), {});
  nodes_.back().back = [this, a, id, wc = std::move(wc)] {
    grad_ref(a) += grad(id)(0, 0) * wc;
  };
  return id;
}

int Tape::concat_cols(const std::vector<int>& parts) {
  if (parts.empty()) throw ConfigError("concat_cols: no parts");
  const int rows = static_cast<int>(value(parts[0]).rows());
  int cols = 0;
  for (int p : parts) {
    if (value(p).rows() != rows) throw ConfigError("concat_cols: row mismatch");
    cols += static_cast<int>(value(p).cols());
  }
  Matrix v(rows, cols);
  int at = 0;
  for (int p : parts) {
    v.middleCols(at, static_cast<int>(value(p).cols())) = value(p);
    at += static_cast<int>(value(p).cols());
  }
  int id = push(std::move(v), {});
  nodes_.back().back = [this, parts, id] {
    int at = 0;
    for (int p : parts) {
      const int w = static_cast<int>(value(p).cols());
      grad_ref(p) += grad(id).middleCols(at, w);
      at += w;
    }
  };
  return id;
}

int Tape::lincomb_row(const std::vector<int>& channels, int weights, int row) {
  if (channels.empty()) throw ConfigError("lincomb_row: no channels");
  if (static_cast<int>(channels.size()) != value(weights).cols()) {
    throw ConfigError("lincomb_row: channel count must match weight columns");
  }
  Matrix v = Matrix::Zero(value(channels[0]).rows(), value(channels[0]).cols());
  for (std::size_t c = 0; c < channels.size(); ++c) {
    v += value(weights)(row, static_cast<int>(c)) * value(channels[c]);
  }
  int id = push(std::move(v), {});
  nodes_.back().back = [this, channels, weights, row, id] {
    const Matrix& g = grad(id);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      const int ci = static_cast<int>(c);
      grad_ref(channels[c]) += value(weights)(row, ci) * g;
      grad_ref(weights)(row, ci) += g.cwiseProduct(value(channels[c])).sum();
    }
  };
  return id;
}

void Tape::backward(int root) {
  if (value(root).rows() != 1 || value(root).cols() != 1) {
    throw ConfigError("backward: root must be a scalar node");
  }
  for (Node& node : nodes_) {
    node.grad.setZero();
  }
  nodes_[static_cast<std::size_t>(root)].grad(0, 0) = 1.0;
  for (int id = root; id >= 0; --id) {
    auto& node = nodes_[static_cast<std::size_t>(id)];
    if (node.back && node.grad.cwiseAbs().sum() != 0.0) {
      node.back();
    }
  }
}

void Tape::clear() { nodes_.clear(); }

}  // namespace gbd
