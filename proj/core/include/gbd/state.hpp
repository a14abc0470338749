// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <vector>

namespace gbd {

enum class Domain { kOriginal, kLogit };

// One point of a diffusion trajectory: adjacency-shaped and feature-shaped
// real matrices (values in (0,1), or their logits), the timestep, and a node
// mask for padded batches.
struct DiffusionState {
  Eigen::MatrixXd adjacency_values;  // N x N, symmetric in the original domain
  Eigen::MatrixXd feature_values;    // N x D
  int t = 0;
  Domain domain = Domain::kOriginal;
  std::vector<bool> node_mask;       // length N; empty means all active

  int n() const { return static_cast<int>(adjacency_values.rows()); }
  int feature_dim() const { return static_cast<int>(feature_values.cols()); }
  bool active(int i) const { return node_mask.empty() || node_mask[static_cast<std::size_t>(i)]; }
};

// Per-edge and per-node concentration values produced by modulation.
// eta_edges is symmetric; eta_nodes broadcasts over feature columns.
struct ConcentrationField {
  Eigen::MatrixXd eta_edges;  // N x N, entries > 0
  Eigen::VectorXd eta_nodes;  // length N, entries > 0

  static ConcentrationField uniform(int n, double eta);
};

}  // namespace gbd
