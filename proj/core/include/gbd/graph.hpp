// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

#include "gbd/state.hpp"

namespace gbd {

// Raw data object: symmetric binary adjacency without self-loops plus node
// features in [0,1]^(N x D).
struct Graph {
  int n = 0;
  Eigen::MatrixXd adjacency;  // n x n, entries in {0,1}
  Eigen::MatrixXd features;   // n x D, entries in [0,1]

  int degree(int v) const { return static_cast<int>(adjacency.row(v).sum() + 0.5); }
  int edge_count() const { return static_cast<int>(adjacency.sum() + 0.5) / 2; }
  std::vector<std::pair<int, int>> edge_list() const;  // u < v, sorted
  std::vector<std::vector<int>> neighbor_lists() const;

  // Throws ConfigError on any invariant violation (asymmetry, self-loops,
  // non-binary adjacency, features outside [0,1]).
  void validate() const;
};

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges);

// Scale-shift map into the diffusion domain. Constraints:
// min(w_A,b_A,w_X,b_X) > 0 and max(w_A+b_A, w_X+b_X) <= 1.
struct TransformParams {
  double w_A = 0.9;
  double b_A = 0.09;
  double w_X = 0.9;
  double b_X = 0.09;

  void validate() const;
};

// A0 = w_A * A + b_A, X0 = w_X * X + b_X elementwise. Diagonal entries are
// carried as b_A and masked downstream.
DiffusionState transform(const Graph& graph, const TransformParams& params);

// Threshold the de-scaled adjacency at `threshold` (>= keeps the edge), copy
// the strict upper triangle down for symmetry, force a zero diagonal, and
// clip inverse-transformed features into [0,1].
Graph inverse_transform_quantize(const Eigen::MatrixXd& adjacency_values,
                                 const Eigen::MatrixXd& feature_values,
                                 const TransformParams& params,
                                 double threshold = 0.5);

}  // namespace gbd
