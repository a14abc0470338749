// SPDX-License-Identifier: Apache-2.0
#include "gbd/graph_stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>

#include "gbd/errors.hpp"

namespace gbd {

StatisticKind statistic_kind_from_string(const std::string& name) {
  if (name == "degree") return StatisticKind::kDegree;
  if (name == "clustering") return StatisticKind::kClustering;
  if (name == "orbit4") return StatisticKind::kOrbit4;
  if (name == "spectral") return StatisticKind::kSpectral;
  throw ConfigError("unknown statistic kind: " + name);
}

std::string to_string(StatisticKind kind) {
  switch (kind) {
    case StatisticKind::kDegree: return "degree";
    case StatisticKind::kClustering: return "clustering";
    case StatisticKind::kOrbit4: return "orbit4";
    case StatisticKind::kSpectral: return "spectral";
  }
  throw ConfigError("unknown statistic kind");
}

Eigen::VectorXd clustering_coefficients(const Graph& graph) {
  const int n = graph.n;
  const auto nbrs = graph.neighbor_lists();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  for (int v = 0; v < n; ++v) {
    const auto& nv = nbrs[static_cast<std::size_t>(v)];
    const int d = static_cast<int>(nv.size());
    if (d < 2) continue;
    int links = 0;
    for (std::size_t a = 0; a < nv.size(); ++a) {
      for (std::size_t b = a + 1; b < nv.size(); ++b) {
        if (graph.adjacency(nv[a], nv[b]) > 0.5) ++links;
      }
    }
    c(v) = 2.0 * links / (static_cast<double>(d) * (d - 1));
  }
  return c;
}

namespace {

// Orbit assignment for a connected induced 4-node subgraph, keyed by edge
// count and within-subgraph degree.
//   3 edges: path (ends 4, middles 5) or star (leaves 6, center 7)
//   4 edges: cycle (8) or tailed triangle (tail 9, base 10, apex 11)
//   5 edges: diamond (deg-2 12, deg-3 13)
//   6 edges: clique (14)
int orbit_of(int edges, int degree, int max_degree) {
  switch (edges) {
    case 3:
      if (max_degree == 3) return degree == 1 ? 6 : 7;
      return degree == 1 ? 4 : 5;
    case 4:
      if (max_degree == 2) return 8;
      if (degree == 1) return 9;
      return degree == 2 ? 10 : 11;
    case 5:
      return degree == 2 ? 12 : 13;
    case 6:
      return 14;
    default:
      throw NumericError("orbit_of: not a connected 4-node subgraph");
  }
}

}  // namespace

Eigen::MatrixXd orbit4_counts(const Graph& graph) {
  const int n = graph.n;
  const auto nbrs = graph.neighbor_lists();
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, 15);

  // Orbits on 2 and 3 nodes from local counts.
  for (int v = 0; v < n; ++v) {
    counts(v, 0) = static_cast<double>(nbrs[static_cast<std::size_t>(v)].size());
  }
  for (int v = 0; v < n; ++v) {
    const auto& nv = nbrs[static_cast<std::size_t>(v)];
    for (std::size_t a = 0; a < nv.size(); ++a) {
      for (std::size_t b = a + 1; b < nv.size(); ++b) {
        if (graph.adjacency(nv[a], nv[b]) > 0.5) {
          counts(v, 3) += 1.0;      // triangle, counted once per corner as center
        } else {
          counts(v, 2) += 1.0;      // path middle
          counts(nv[a], 1) += 1.0;  // path ends
          counts(nv[b], 1) += 1.0;
        }
      }
    }
  }

  // Size-4: enumerate connected subgraphs {a < b < c < d reachable} via
  // neighborhood expansion with canonical smallest-vertex ordering, then
  // classify the induced subgraph.
  auto classify = [&](const std::array<int, 4>& vs) {
    int edges = 0;
    std::array<int, 4> deg{0, 0, 0, 0};
    for (int a = 0; a < 4; ++a) {
      for (int b = a + 1; b < 4; ++b) {
        if (graph.adjacency(vs[static_cast<std::size_t>(a)], vs[static_cast<std::size_t>(b)]) > 0.5) {
          ++edges;
          ++deg[static_cast<std::size_t>(a)];
          ++deg[static_cast<std::size_t>(b)];
        }
      }
    }
    const int max_deg = *std::max_element(deg.begin(), deg.end());
    for (int a = 0; a < 4; ++a) {
      counts(vs[static_cast<std::size_t>(a)],
             orbit_of(edges, deg[static_cast<std::size_t>(a)], max_deg)) += 1.0;
    }
  };

  // ESU: grow connected sets from each root using only higher-numbered
  // vertices, with the exclusive-neighborhood rule so each set appears once.
  std::vector<char> forbidden(static_cast<std::size_t>(n), 0);
  struct Frame {
    std::vector<int> sub;
    std::vector<int> extension;
    std::vector<int> newly_forbidden;
  };
  for (int root = 0; root < n; ++root) {
    std::vector<Frame> stack;
    Frame first;
    first.sub = {root};
    for (int w : nbrs[static_cast<std::size_t>(root)]) {
      if (w > root) {
        first.extension.push_back(w);
        forbidden[static_cast<std::size_t>(w)] = 1;
        first.newly_forbidden.push_back(w);
      }
    }
    forbidden[static_cast<std::size_t>(root)] = 1;
    first.newly_forbidden.push_back(root);

    // Depth-first expansion without recursion.
    std::vector<std::pair<Frame, std::size_t>> work;
    work.emplace_back(std::move(first), 0);
    while (!work.empty()) {
      auto& [frame, next] = work.back();
      if (frame.sub.size() == 4) {
        classify({frame.sub[0], frame.sub[1], frame.sub[2], frame.sub[3]});
        for (int w : frame.newly_forbidden) forbidden[static_cast<std::size_t>(w)] = 0;
        work.pop_back();
        continue;
      }
      if (next >= frame.extension.size()) {
        for (int w : frame.newly_forbidden) forbidden[static_cast<std::size_t>(w)] = 0;
        work.pop_back();
        continue;
      }
      const int v = frame.extension[next];
      ++next;
      Frame child;
      child.sub = frame.sub;
      child.sub.push_back(v);
      // Remaining of the parent's extension after v, plus v's exclusive
      // neighbors.
      child.extension.assign(frame.extension.begin() + static_cast<std::ptrdiff_t>(next),
                             frame.extension.end());
      for (int w : nbrs[static_cast<std::size_t>(v)]) {
        if (w > root && !forbidden[static_cast<std::size_t>(w)]) {
          child.extension.push_back(w);
          forbidden[static_cast<std::size_t>(w)] = 1;
          child.newly_forbidden.push_back(w);
        }
      }
      work.emplace_back(std::move(child), 0);
    }
    forbidden[static_cast<std::size_t>(root)] = 0;
  }
  return counts;
}

Eigen::VectorXd normalized_laplacian_eigenvalues(const Graph& graph) {
  const int n = graph.n;
  Eigen::VectorXd deg = graph.adjacency.rowwise().sum();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (deg(i) > 0.0) lap(i, i) = 1.0;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (graph.adjacency(i, j) > 0.5) {
        lap(i, j) -= 1.0 / std::sqrt(deg(i) * deg(j));
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

namespace {

GraphStatistic histogram_statistic(StatisticKind kind, const Eigen::VectorXd& samples, int bins,
                                   double lo, double hi) {
  GraphStatistic s;
  s.kind = kind;
  s.is_histogram = true;
  s.bin_width = (hi - lo) / bins;
  s.values = Eigen::VectorXd::Zero(bins);
  if (samples.size() == 0) return s;
  for (int i = 0; i < samples.size(); ++i) {
    int b = static_cast<int>((samples(i) - lo) / (hi - lo) * bins);
    b = std::clamp(b, 0, bins - 1);
    s.values(b) += 1.0;
  }
  s.values /= s.values.sum();
  return s;
}

}  // namespace

GraphStatistic graph_statistic(const Graph& graph, StatisticKind kind, int clustering_bins,
                               int spectral_bins) {
  switch (kind) {
    case StatisticKind::kDegree: {
      int dmax = 0;
      for (int v = 0; v < graph.n; ++v) dmax = std::max(dmax, graph.degree(v));
      GraphStatistic s;
      s.kind = kind;
      s.is_histogram = true;
      s.bin_width = 1.0;
      s.values = Eigen::VectorXd::Zero(dmax + 1);
      for (int v = 0; v < graph.n; ++v) s.values(graph.degree(v)) += 1.0;
      s.values /= s.values.sum();
      return s;
    }
    case StatisticKind::kClustering:
      return histogram_statistic(kind, clustering_coefficients(graph), clustering_bins, 0.0, 1.0);
    case StatisticKind::kOrbit4: {
      GraphStatistic s;
      s.kind = kind;
      s.is_histogram = false;
      s.bin_width = 1.0;
      s.values = orbit4_counts(graph).colwise().mean();
      return s;
    }
    case StatisticKind::kSpectral:
      return histogram_statistic(kind, normalized_laplacian_eigenvalues(graph), spectral_bins,
                                 0.0, 2.0);
  }
  throw ConfigError("unknown statistic kind");
}

}  // namespace gbd
