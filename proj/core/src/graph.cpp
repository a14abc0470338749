// SPDX-License-Identifier: Apache-2.0
#include "gbd/graph.hpp"

#include <algorithm>

#include "gbd/errors.hpp"

namespace gbd {

std::vector<std::pair<int, int>> Graph::edge_list() const {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (adjacency(u, v) > 0.5) edges.emplace_back(u, v);
    }
  }
  return edges;
}

std::vector<std::vector<int>> Graph::neighbor_lists() const {
  std::vector<std::vector<int>> nbrs(static_cast<std::size_t>(n));
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (adjacency(u, v) > 0.5) nbrs[static_cast<std::size_t>(u)].push_back(v);
    }
  }
  return nbrs;
}

void Graph::validate() const {
  if (n < 1) throw ConfigError("graph: node count must be >= 1");
  if (adjacency.rows() != n || adjacency.cols() != n) {
    throw ConfigError("graph: adjacency shape mismatch");
  }
  if (features.size() > 0 && features.rows() != n) {
    throw ConfigError("graph: feature row count mismatch");
  }
  for (int i = 0; i < n; ++i) {
    if (adjacency(i, i) != 0.0) throw ConfigError("graph: nonzero diagonal (self-loop)");
    for (int j = 0; j < n; ++j) {
      const double a = adjacency(i, j);
      if (a != 0.0 && a != 1.0) throw ConfigError("graph: adjacency entries must be 0 or 1");
      if (a != adjacency(j, i)) throw ConfigError("graph: adjacency must be symmetric");
    }
  }
  for (int i = 0; i < features.rows(); ++i) {
    for (int j = 0; j < features.cols(); ++j) {
      const double x = features(i, j);
      if (!(x >= 0.0 && x <= 1.0)) throw ConfigError("graph: feature entries must lie in [0,1]");
    }
  }
}

Graph make_graph(int n, const std::vector<std::pair<int, int>>& edges) {
  Graph g;
  g.n = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  g.features = Eigen::MatrixXd::Zero(n, 0);
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n || u == v) {
      throw ConfigError("make_graph: edge endpoint out of range or self-loop");
    }
    g.adjacency(u, v) = 1.0;
    g.adjacency(v, u) = 1.0;
  }
  return g;
}

void TransformParams::validate() const {
  const double lo = std::min(std::min(w_A, b_A), std::min(w_X, b_X));
  if (!(lo > 0.0)) throw ConfigError("transform: all of w_A, b_A, w_X, b_X must be > 0");
  if (!(std::max(w_A + b_A, w_X + b_X) <= 1.0)) {
    throw ConfigError("transform: requires max(w_A + b_A, w_X + b_X) <= 1");
  }
}

DiffusionState transform(const Graph& graph, const TransformParams& params) {
  params.validate();
  DiffusionState s;
  s.t = 0;
  s.domain = Domain::kOriginal;
  s.adjacency_values = params.w_A * graph.adjacency.array() + params.b_A;
  // The diagonal carries the "no edge" value b_A; it is masked downstream.
  s.adjacency_values.diagonal().setConstant(params.b_A);
  s.feature_values = params.w_X * graph.features.array() + params.b_X;
  return s;
}

Graph inverse_transform_quantize(const Eigen::MatrixXd& adjacency_values,
                                 const Eigen::MatrixXd& feature_values,
                                 const TransformParams& params,
                                 double threshold) {
  params.validate();
  const int n = static_cast<int>(adjacency_values.rows());
  Graph g;
  g.n = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double raw = (adjacency_values(u, v) - params.b_A) / params.w_A;
      if (raw >= threshold) {
        g.adjacency(u, v) = 1.0;
        g.adjacency(v, u) = 1.0;
      }
    }
  }
  g.features = ((feature_values.array() - params.b_X) / params.w_X).cwiseMax(0.0).cwiseMin(1.0);
  return g;
}

ConcentrationField ConcentrationField::uniform(int n, double eta) {
  ConcentrationField f;
  f.eta_edges = Eigen::MatrixXd::Constant(n, n, eta);
  f.eta_nodes = Eigen::VectorXd::Constant(n, eta);
  return f;
}

}  // namespace gbd
