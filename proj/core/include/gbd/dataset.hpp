// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbd/graph.hpp"
#include "gbd/rng.hpp"

namespace gbd {

enum class DatasetKind { kCommunitySmall, kGrid, kSbm, kPlanar };

DatasetKind dataset_kind_from_string(const std::string& name);
std::string to_string(DatasetKind kind);

struct DatasetSpec {
  DatasetKind kind = DatasetKind::kCommunitySmall;
  int count = 100;
  std::uint64_t seed = 0;

  // community_small: two equal-size ER(p_intra) halves with n in [12, 20]
  // plus floor(inter_frac * n) uniformly chosen inter-community edges.
  double p_intra = 0.7;
  double inter_frac = 0.05;

  // grid: r x c lattices with sides in [min_side, max_side].
  int min_side = 10;
  int max_side = 20;

  // sbm: communities_min..communities_max blocks, each of size
  // [block_min, block_max], within-block edge probability p_within,
  // between-block probability p_between.
  int communities_min = 2;
  int communities_max = 5;
  int block_min = 20;
  int block_max = 40;
  double p_within = 0.3;
  double p_between = 0.05;

  // planar: Delaunay triangulation of planar_nodes uniform points in the
  // unit square.
  int planar_nodes = 64;

  void validate() const;
};

// Deterministic in the spec (identical seed => identical dataset); each graph
// is generated from an independently derived stream, so the result does not
// depend on evaluation order or parallelism.
std::vector<Graph> generate_dataset(const DatasetSpec& spec);

// Single-graph generators used by generate_dataset; exposed for tests.
Graph generate_community_small(const DatasetSpec& spec, RngStream stream);
Graph generate_grid(const DatasetSpec& spec, RngStream stream);
Graph generate_sbm(const DatasetSpec& spec, RngStream stream);
Graph generate_planar(const DatasetSpec& spec, RngStream stream);

// Delaunay triangulation of points in general position; returns the edge
// list over point indices.
std::vector<std::pair<int, int>> delaunay_edges(const std::vector<std::pair<double, double>>& pts);

}  // namespace gbd
