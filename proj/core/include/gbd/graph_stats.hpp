// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>

#include "gbd/graph.hpp"

namespace gbd {

enum class StatisticKind { kDegree, kClustering, kOrbit4, kSpectral };

StatisticKind statistic_kind_from_string(const std::string& name);
std::string to_string(StatisticKind kind);

// Per-graph summary entering the MMD kernel. Histogram statistics carry
// normalized bin weights plus a bin width; the orbit statistic is an
// unnormalized 15-dimensional mean count vector compared by Euclidean
// distance.
struct GraphStatistic {
  StatisticKind kind = StatisticKind::kDegree;
  Eigen::VectorXd values;   // histogram weights or orbit mean counts
  double bin_width = 1.0;
  bool is_histogram = true;
};

GraphStatistic graph_statistic(const Graph& graph, StatisticKind kind,
                               int clustering_bins = 100, int spectral_bins = 200);

// Local clustering coefficients (degree < 2 contributes 0).
Eigen::VectorXd clustering_coefficients(const Graph& graph);

// Counts of the 15 node orbits of connected graphlets on <= 4 nodes,
// one row per node. Exact, via enumeration of connected subgraphs.
Eigen::MatrixXd orbit4_counts(const Graph& graph);

// Eigenvalues of the symmetric normalized Laplacian (isolated nodes
// contribute eigenvalue 0).
Eigen::VectorXd normalized_laplacian_eigenvalues(const Graph& graph);

}  // namespace gbd
