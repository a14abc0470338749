// SPDX-License-Identifier: Apache-2.0
#include "gbd/modulation.hpp"

#include <deque>

#include "gbd/errors.hpp"

namespace gbd {

ModulationKind modulation_kind_from_string(const std::string& name) {
  if (name == "none") return ModulationKind::kNone;
  if (name == "degree") return ModulationKind::kDegree;
  if (name == "betweenness") return ModulationKind::kBetweenness;
  throw ConfigError("unknown modulation kind: " + name);
}

std::string to_string(ModulationKind kind) {
  switch (kind) {
    case ModulationKind::kNone: return "none";
    case ModulationKind::kDegree: return "degree";
    case ModulationKind::kBetweenness: return "betweenness";
  }
  throw ConfigError("unknown modulation kind");
}

void ModulationStrategy::validate() const {
  if (!(default_eta > 0.0)) throw ConfigError("modulation: default_eta must be > 0");
  if (levels.size() != thresholds.size()) {
    throw ConfigError("modulation: levels and thresholds must have the same length");
  }
  for (double v : levels) {
    if (!(v > 0.0)) throw ConfigError("modulation: eta levels must be > 0");
  }
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > 0.0 && thresholds[i] <= 1.0)) {
      throw ConfigError("modulation: thresholds must lie in (0,1]");
    }
    if (i > 0 && !(thresholds[i] < thresholds[i - 1])) {
      throw ConfigError("modulation: thresholds must be strictly decreasing");
    }
  }
}

Eigen::VectorXd degree_centrality(const Graph& graph) {
  return graph.adjacency.rowwise().sum();
}

// Brandes accumulation; each unordered pair counted once.
Eigen::VectorXd betweenness_centrality(const Graph& graph) {
  const int n = graph.n;
  const auto nbrs = graph.neighbor_lists();
  Eigen::VectorXd cb = Eigen::VectorXd::Zero(n);
  std::vector<int> dist(static_cast<std::size_t>(n));
  std::vector<double> sigma(static_cast<std::size_t>(n));
  std::vector<double> delta(static_cast<std::size_t>(n));
  std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));

  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds) p.clear();
    order.clear();

    dist[static_cast<std::size_t>(s)] = 0;
    sigma[static_cast<std::size_t>(s)] = 1.0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      order.push_back(v);
      for (int w : nbrs[static_cast<std::size_t>(v)]) {
        if (dist[static_cast<std::size_t>(w)] < 0) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
          queue.push_back(w);
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(v)] + 1) {
          sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
          preds[static_cast<std::size_t>(w)].push_back(v);
        }
      }
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      const int w = *it;
      for (int v : preds[static_cast<std::size_t>(w)]) {
        delta[static_cast<std::size_t>(v)] +=
            sigma[static_cast<std::size_t>(v)] / sigma[static_cast<std::size_t>(w)] *
            (1.0 + delta[static_cast<std::size_t>(w)]);
      }
      if (w != s) cb(w) += delta[static_cast<std::size_t>(w)];
    }
  }
  return cb / 2.0;  // each unordered pair was visited from both endpoints
}

namespace {

double map_to_level(double c, const ModulationStrategy& strategy) {
  const auto& th = strategy.thresholds;
  const auto& lv = strategy.levels;
  for (std::size_t i = 0; i + 1 < th.size(); ++i) {
    if (c <= th[i] && c > th[i + 1]) return lv[i];
  }
  return lv.back();  // last interval is closed at its lower end
}

}  // namespace

ConcentrationField assign_eta(const Graph& graph, const ModulationStrategy& strategy) {
  strategy.validate();
  const int n = graph.n;
  if (strategy.kind == ModulationKind::kNone) {
    return ConcentrationField::uniform(n, strategy.default_eta);
  }
  Eigen::VectorXd c = strategy.kind == ModulationKind::kDegree ? degree_centrality(graph)
                                                               : betweenness_centrality(graph);
  const double cmax = c.maxCoeff();
  if (cmax > 0.0) {
    c /= cmax;
  }
  ConcentrationField field;
  field.eta_nodes = Eigen::VectorXd::Zero(n);
  field.eta_edges = Eigen::MatrixXd::Zero(n, n);
  for (int u = 0; u < n; ++u) {
    field.eta_nodes(u) = map_to_level(c(u), strategy);
  }
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      field.eta_edges(u, v) = map_to_level(std::max(c(u), c(v)), strategy);
    }
  }
  return field;
}

}  // namespace gbd
