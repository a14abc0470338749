// SPDX-License-Identifier: Apache-2.0
#include "gbd/validity.hpp"

#include <deque>
#include <map>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>

#include "gbd/errors.hpp"

namespace gbd {

bool is_connected(const Graph& graph) {
  const int n = graph.n;
  if (n == 0) return false;
  const auto nbrs = graph.neighbor_lists();
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::deque<int> queue{0};
  seen[0] = 1;
  int visited = 1;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : nbrs[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++visited;
        queue.push_back(w);
      }
    }
  }
  return visited == n;
}

bool is_planar(const Graph& graph) {
  using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  BoostGraph bg(static_cast<std::size_t>(graph.n));
  for (const auto& [u, v] : graph.edge_list()) {
    boost::add_edge(static_cast<std::size_t>(u), static_cast<std::size_t>(v), bg);
  }
  return boost::boyer_myrvold_planarity_test(bg);
}

// Clauset-Newman-Moore style agglomeration with direct delta-Q bookkeeping
// over community pairs. Fine at N <= ~400.
std::vector<int> greedy_modularity_communities(const Graph& graph) {
  const int n = graph.n;
  std::vector<int> community(static_cast<std::size_t>(n));
  const double two_m = graph.adjacency.sum();  // 2|E|
  if (two_m <= 0.0) {
    for (int v = 0; v < n; ++v) community[static_cast<std::size_t>(v)] = v;
    return community;
  }
  for (int v = 0; v < n; ++v) community[static_cast<std::size_t>(v)] = v;

  // e(c1,c2): fraction of edge endpoints between communities; a(c): fraction
  // of endpoints attached to community c.
  std::map<std::pair<int, int>, double> e;
  std::vector<double> a(static_cast<std::size_t>(n), 0.0);
  std::vector<bool> alive(static_cast<std::size_t>(n), true);
  for (int u = 0; u < n; ++u) {
    a[static_cast<std::size_t>(u)] = graph.adjacency.row(u).sum() / two_m;
    for (int v = u + 1; v < n; ++v) {
      if (graph.adjacency(u, v) > 0.5) e[{u, v}] = 2.0 / two_m;
    }
  }

  for (;;) {
    double best_dq = 0.0;
    std::pair<int, int> best{-1, -1};
    for (const auto& [pair, eij] : e) {
      const auto [c1, c2] = pair;
      if (!alive[static_cast<std::size_t>(c1)] || !alive[static_cast<std::size_t>(c2)]) continue;
      const double dq = eij - 2.0 * a[static_cast<std::size_t>(c1)] * a[static_cast<std::size_t>(c2)];
      if (dq > best_dq + 1e-15) {
        best_dq = dq;
        best = pair;
      }
    }
    if (best.first < 0) break;
    const auto [keep, drop] = best;
    // Merge drop into keep.
    std::map<std::pair<int, int>, double> updated;
    for (const auto& [pair, eij] : e) {
      auto [c1, c2] = pair;
      if (!alive[static_cast<std::size_t>(c1)] || !alive[static_cast<std::size_t>(c2)]) continue;
      if (c1 == drop) c1 = keep;
      if (c2 == drop) c2 = keep;
      if (c1 == c2) continue;
      if (c1 > c2) std::swap(c1, c2);
      updated[{c1, c2}] += eij;
    }
    e = std::move(updated);
    a[static_cast<std::size_t>(keep)] += a[static_cast<std::size_t>(drop)];
    alive[static_cast<std::size_t>(drop)] = false;
    for (int v = 0; v < n; ++v) {
      if (community[static_cast<std::size_t>(v)] == drop) {
        community[static_cast<std::size_t>(v)] = keep;
      }
    }
  }

  // Compact labels to 0..k-1 in first-appearance order.
  std::map<int, int> relabel;
  for (int v = 0; v < n; ++v) {
    const auto it = relabel.emplace(community[static_cast<std::size_t>(v)],
                                    static_cast<int>(relabel.size())).first;
    community[static_cast<std::size_t>(v)] = it->second;
  }
  return community;
}

bool supports_validity(DatasetKind kind) {
  return kind == DatasetKind::kPlanar || kind == DatasetKind::kSbm;
}

bool validity(const Graph& graph, DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kPlanar:
      return is_connected(graph) && is_planar(graph);
    case DatasetKind::kSbm: {
      const std::vector<int> comm = greedy_modularity_communities(graph);
      std::map<int, int> sizes;
      for (int c : comm) ++sizes[c];
      const int k = static_cast<int>(sizes.size());
      if (k < 2 || k > 5) return false;
      for (const auto& [c, size] : sizes) {
        if (size < 20 || size > 40) return false;
      }
      return true;
    }
    default:
      throw ConfigError("validity: unsupported dataset kind " + to_string(kind));
  }
}

}  // namespace gbd
