// SPDX-License-Identifier: Apache-2.0
#include "gbd/node_features.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>

#include "gbd/errors.hpp"
#include "gbd/modulation.hpp"

namespace gbd {

FeatureScheme feature_scheme_from_string(const std::string& name) {
  if (name == "degree_onehot") return FeatureScheme::kDegreeOnehot;
  if (name == "degree_normalized") return FeatureScheme::kDegreeNormalized;
  if (name == "betweenness") return FeatureScheme::kBetweenness;
  if (name == "eigenvectors") return FeatureScheme::kEigenvectors;
  throw ConfigError("unknown feature scheme: " + name);
}

std::string to_string(FeatureScheme scheme) {
  switch (scheme) {
    case FeatureScheme::kDegreeOnehot: return "degree_onehot";
    case FeatureScheme::kDegreeNormalized: return "degree_normalized";
    case FeatureScheme::kBetweenness: return "betweenness";
    case FeatureScheme::kEigenvectors: return "eigenvectors";
  }
  throw ConfigError("unknown feature scheme");
}

int max_degree(const std::vector<Graph>& graphs) {
  int best = 0;
  for (const Graph& g : graphs) {
    for (int v = 0; v < g.n; ++v) best = std::max(best, g.degree(v));
  }
  return best;
}

namespace {

Eigen::MatrixXd eigenvector_features(const Graph& graph) {
  const int n = graph.n;
  if (n < 3) throw ConfigError("eigenvector features require >= 3 nodes");
  Eigen::MatrixXd lap = -graph.adjacency;
  for (int v = 0; v < n; ++v) lap(v, v) = graph.adjacency.row(v).sum();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
  const Eigen::VectorXd& evals = solver.eigenvalues();  // ascending
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  const double tol = 1e-9 * std::max(1.0, evals.cwiseAbs().maxCoeff());
  std::vector<int> nonzero;
  for (int i = 0; i < n; ++i) {
    if (evals(i) > tol) nonzero.push_back(i);
  }
  if (nonzero.size() < 2) {
    throw ConfigError("eigenvector features need at least two nonzero Laplacian eigenvalues");
  }
  Eigen::MatrixXd feats(n, 2);
  for (int k = 0; k < 2; ++k) {
    Eigen::VectorXd v = evecs.col(nonzero[static_cast<std::size_t>(k)]);
    // Sign convention: first component of nonnegligible magnitude positive.
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12) {
        if (v(i) < 0.0) v = -v;
        break;
      }
    }
    const double lo = v.minCoeff();
    const double hi = v.maxCoeff();
    if (hi - lo > 1e-12) {
      feats.col(k) = (v.array() - lo) / (hi - lo);
    } else {
      feats.col(k).setConstant(0.5);
    }
  }
  return feats;
}

}  // namespace

Eigen::MatrixXd init_node_features(const Graph& graph, FeatureScheme scheme,
                                   int dataset_max_degree) {
  graph.validate();
  const int n = graph.n;
  switch (scheme) {
    case FeatureScheme::kDegreeOnehot: {
      int dmax = dataset_max_degree;
      if (dmax < 0) {
        dmax = 0;
        for (int v = 0; v < n; ++v) dmax = std::max(dmax, graph.degree(v));
      }
      Eigen::MatrixXd feats = Eigen::MatrixXd::Zero(n, dmax + 1);
      for (int v = 0; v < n; ++v) {
        const int d = graph.degree(v);
        if (d > dmax) throw ConfigError("degree exceeds dataset max degree");
        feats(v, d) = 1.0;
      }
      return feats;
    }
    case FeatureScheme::kDegreeNormalized: {
      Eigen::MatrixXd feats(n, 1);
      for (int v = 0; v < n; ++v) {
        feats(v, 0) = n > 1 ? static_cast<double>(graph.degree(v)) / (n - 1) : 0.0;
      }
      return feats;
    }
    case FeatureScheme::kBetweenness: {
      Eigen::VectorXd cb = betweenness_centrality(graph);
      const double denom = n > 2 ? static_cast<double>(n - 1) * (n - 2) / 2.0 : 1.0;
      Eigen::MatrixXd feats(n, 1);
      feats.col(0) = cb / denom;
      return feats;
    }
    case FeatureScheme::kEigenvectors:
      return eigenvector_features(graph);
  }
  throw ConfigError("unknown feature scheme");
}

void apply_feature_scheme(std::vector<Graph>& graphs, FeatureScheme scheme) {
  const int dmax = scheme == FeatureScheme::kDegreeOnehot ? max_degree(graphs) : -1;
  for (Graph& g : graphs) {
    g.features = init_node_features(g, scheme, dmax);
  }
}

}  // namespace gbd
