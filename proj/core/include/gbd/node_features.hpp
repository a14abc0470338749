// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gbd/graph.hpp"

namespace gbd {

enum class FeatureScheme { kDegreeOnehot, kDegreeNormalized, kBetweenness, kEigenvectors };

FeatureScheme feature_scheme_from_string(const std::string& name);
std::string to_string(FeatureScheme scheme);

// Node-feature initialization.
//   degree_onehot     D = dataset_max_degree + 1, one-hot on node degree
//   degree_normalized D = 1, deg / (N - 1)
//   betweenness       D = 1, betweenness / C(N-1, 2)
//   eigenvectors      D = 2, Laplacian eigenvectors of the two smallest
//                     nonzero eigenvalues, sign-fixed and min-max rescaled
// dataset_max_degree is only consulted by degree_onehot.
Eigen::MatrixXd init_node_features(const Graph& graph, FeatureScheme scheme,
                                   int dataset_max_degree = -1);

// Fills graph.features for every graph, sharing the dataset-level max degree
// for the one-hot scheme.
void apply_feature_scheme(std::vector<Graph>& graphs, FeatureScheme scheme);

int max_degree(const std::vector<Graph>& graphs);

}  // namespace gbd
