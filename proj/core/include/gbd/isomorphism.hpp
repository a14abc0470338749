// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "gbd/graph.hpp"

namespace gbd {

// Weisfeiler-Leman refinement hash over `rounds` rounds. Isomorphic graphs
// always collide; the converse holds for almost all graphs at this scale.
std::uint64_t wl_hash(const Graph& graph, int rounds = 3);

// Exact isomorphism (VF2 with WL-color compatibility pruning).
bool is_isomorphic(const Graph& a, const Graph& b);

// Fractions of generated graphs that are unique (not isomorphic to an
// earlier generated graph) and novel (not isomorphic to any training graph).
// Buckets by WL hash first, then confirms with exact isomorphism.
std::pair<double, double> uniqueness_novelty(const std::vector<Graph>& generated,
                                             const std::vector<Graph>& training);

// Per-graph flags used by the combined validity/uniqueness/novelty report.
struct UniqueNovelFlags {
  std::vector<bool> unique;
  std::vector<bool> novel;
};
UniqueNovelFlags uniqueness_novelty_flags(const std::vector<Graph>& generated,
                                          const std::vector<Graph>& training);

}  // namespace gbd
