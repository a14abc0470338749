// SPDX-License-Identifier: Apache-2.0
#include "gbd/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "gbd/errors.hpp"

namespace gbd {

DatasetKind dataset_kind_from_string(const std::string& name) {
  if (name == "community_small") return DatasetKind::kCommunitySmall;
  if (name == "grid") return DatasetKind::kGrid;
  if (name == "sbm") return DatasetKind::kSbm;
  if (name == "planar") return DatasetKind::kPlanar;
  throw ConfigError("unknown dataset kind: " + name);
}

std::string to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::kCommunitySmall: return "community_small";
    case DatasetKind::kGrid: return "grid";
    case DatasetKind::kSbm: return "sbm";
    case DatasetKind::kPlanar: return "planar";
  }
  throw ConfigError("unknown dataset kind");
}

void DatasetSpec::validate() const {
  if (count < 0) throw ConfigError("dataset: count must be >= 0");
  switch (kind) {
    case DatasetKind::kCommunitySmall:
      if (!(p_intra > 0.0 && p_intra <= 1.0)) throw ConfigError("dataset: p_intra in (0,1]");
      if (inter_frac < 0.0) throw ConfigError("dataset: inter_frac must be >= 0");
      break;
    case DatasetKind::kGrid:
      if (min_side < 2 || max_side < min_side) throw ConfigError("dataset: bad grid sides");
      if (min_side * min_side < 100 || max_side * max_side > 400) {
        throw ConfigError("dataset: grid sides must keep 100 <= N <= 400");
      }
      break;
    case DatasetKind::kSbm:
      if (communities_min < 1 || communities_max < communities_min) {
        throw ConfigError("dataset: bad community count range");
      }
      if (block_min < 1 || block_max < block_min) throw ConfigError("dataset: bad block size range");
      if (!(p_within >= 0.0 && p_within <= 1.0 && p_between >= 0.0 && p_between <= 1.0)) {
        throw ConfigError("dataset: block probabilities must lie in [0,1]");
      }
      break;
    case DatasetKind::kPlanar:
      if (planar_nodes < 3) throw ConfigError("dataset: planar graphs need >= 3 points");
      break;
  }
}

namespace {

int uniform_int(RngStream& rng, int lo, int hi) {  // inclusive
  const auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<int>(rng.next_u64() % span);
}

}  // namespace

Graph generate_community_small(const DatasetSpec& spec, RngStream stream) {
  const int half = uniform_int(stream, 6, 10);
  const int n = 2 * half;
  std::vector<std::pair<int, int>> edges;
  for (int c = 0; c < 2; ++c) {
    const int base = c * half;
    for (int u = 0; u < half; ++u) {
      for (int v = u + 1; v < half; ++v) {
        if (stream.next_double() < spec.p_intra) edges.emplace_back(base + u, base + v);
      }
    }
  }
  const int inter = static_cast<int>(std::floor(spec.inter_frac * n));
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < inter) {
    const int u = uniform_int(stream, 0, half - 1);
    const int v = half + uniform_int(stream, 0, half - 1);
    chosen.emplace(u, v);
  }
  edges.insert(edges.end(), chosen.begin(), chosen.end());
  return make_graph(n, edges);
}

Graph generate_grid(const DatasetSpec& spec, RngStream stream) {
  const int rows = uniform_int(stream, spec.min_side, spec.max_side);
  const int cols = uniform_int(stream, spec.min_side, spec.max_side);
  std::vector<std::pair<int, int>> edges;
  auto id = [cols](int r, int c) { return r * cols + c; };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1));
      if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c));
    }
  }
  return make_graph(rows * cols, edges);
}

Graph generate_sbm(const DatasetSpec& spec, RngStream stream) {
  const int k = uniform_int(stream, spec.communities_min, spec.communities_max);
  std::vector<int> sizes(static_cast<std::size_t>(k));
  int n = 0;
  for (int c = 0; c < k; ++c) {
    sizes[static_cast<std::size_t>(c)] = uniform_int(stream, spec.block_min, spec.block_max);
    n += sizes[static_cast<std::size_t>(c)];
  }
  std::vector<int> block(static_cast<std::size_t>(n));
  int at = 0;
  for (int c = 0; c < k; ++c) {
    for (int i = 0; i < sizes[static_cast<std::size_t>(c)]; ++i) block[static_cast<std::size_t>(at++)] = c;
  }
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const double p = block[static_cast<std::size_t>(u)] == block[static_cast<std::size_t>(v)]
                           ? spec.p_within
                           : spec.p_between;
      if (stream.next_double() < p) edges.emplace_back(u, v);
    }
  }
  return make_graph(n, edges);
}

// Bowyer-Watson incremental triangulation. Adequate for point sets in
// general position at this scale; random uniform points are degenerate with
// probability zero.
std::vector<std::pair<int, int>> delaunay_edges(const std::vector<std::pair<double, double>>& pts) {
  struct Tri {
    int a, b, c;
    double cx, cy, r2;  // circumcircle
  };
  const int n = static_cast<int>(pts.size());
  if (n < 3) throw ConfigError("delaunay: need at least 3 points");

  // Super-triangle enclosing the unit square with generous margin.
  std::vector<std::pair<double, double>> p = pts;
  p.emplace_back(-10.0, -10.0);
  p.emplace_back(30.0, -10.0);
  p.emplace_back(-10.0, 30.0);
  const int s0 = n, s1 = n + 1, s2 = n + 2;

  auto circum = [&p](int a, int b, int c, Tri& t) {
    const double ax = p[static_cast<std::size_t>(a)].first, ay = p[static_cast<std::size_t>(a)].second;
    const double bx = p[static_cast<std::size_t>(b)].first, by = p[static_cast<std::size_t>(b)].second;
    const double cx = p[static_cast<std::size_t>(c)].first, cy = p[static_cast<std::size_t>(c)].second;
    const double d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    const double a2 = ax * ax + ay * ay;
    const double b2 = bx * bx + by * by;
    const double c2 = cx * cx + cy * cy;
    t.cx = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    t.cy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    const double dx = ax - t.cx, dy = ay - t.cy;
    t.r2 = dx * dx + dy * dy;
  };

  std::vector<Tri> tris;
  {
    Tri t{s0, s1, s2, 0, 0, 0};
    circum(s0, s1, s2, t);
    tris.push_back(t);
  }

  for (int i = 0; i < n; ++i) {
    const double px = p[static_cast<std::size_t>(i)].first;
    const double py = p[static_cast<std::size_t>(i)].second;
    std::vector<Tri> keep;
    std::vector<std::pair<int, int>> boundary;
    auto add_edge = [&boundary](int u, int v) {
      // Shared edges appear twice with opposite orientation and cancel.
      for (auto it = boundary.begin(); it != boundary.end(); ++it) {
        if (it->first == v && it->second == u) {
          boundary.erase(it);
          return;
        }
      }
      boundary.emplace_back(u, v);
    };
    for (const Tri& t : tris) {
      const double dx = px - t.cx, dy = py - t.cy;
      if (dx * dx + dy * dy < t.r2) {
        add_edge(t.a, t.b);
        add_edge(t.b, t.c);
        add_edge(t.c, t.a);
      } else {
        keep.push_back(t);
      }
    }
    tris = std::move(keep);
    for (const auto& [u, v] : boundary) {
      Tri t{u, v, i, 0, 0, 0};
      circum(u, v, i, t);
      tris.push_back(t);
    }
  }

  std::set<std::pair<int, int>> edges;
  for (const Tri& t : tris) {
    const std::array<std::pair<int, int>, 3> es{{{t.a, t.b}, {t.b, t.c}, {t.c, t.a}}};
    for (auto [u, v] : es) {
      if (u >= n || v >= n) continue;  // drop super-triangle edges
      edges.emplace(std::min(u, v), std::max(u, v));
    }
  }
  return {edges.begin(), edges.end()};
}

Graph generate_planar(const DatasetSpec& spec, RngStream stream) {
  std::vector<std::pair<double, double>> pts(static_cast<std::size_t>(spec.planar_nodes));
  for (auto& pt : pts) {
    pt.first = stream.next_double();
    pt.second = stream.next_double();
  }
  return make_graph(spec.planar_nodes, delaunay_edges(pts));
}

std::vector<Graph> generate_dataset(const DatasetSpec& spec) {
  spec.validate();
  RngStream root(spec.seed);
  std::vector<Graph> graphs;
  graphs.reserve(static_cast<std::size_t>(spec.count));
  for (int i = 0; i < spec.count; ++i) {
    RngStream stream = root.derive(static_cast<std::uint64_t>(i));
    switch (spec.kind) {
      case DatasetKind::kCommunitySmall: graphs.push_back(generate_community_small(spec, stream)); break;
      case DatasetKind::kGrid: graphs.push_back(generate_grid(spec, stream)); break;
      case DatasetKind::kSbm: graphs.push_back(generate_sbm(spec, stream)); break;
      case DatasetKind::kPlanar: graphs.push_back(generate_planar(spec, stream)); break;
    }
  }
  return graphs;
}

}  // namespace gbd
