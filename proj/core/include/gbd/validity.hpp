// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gbd/dataset.hpp"
#include "gbd/graph.hpp"

namespace gbd {

bool is_connected(const Graph& graph);

// Exact planarity test (Boyer-Myrvold).
bool is_planar(const Graph& graph);

// Greedy modularity maximization (agglomerative merges until no merge
// improves modularity). Returns the community assignment per node.
std::vector<int> greedy_modularity_communities(const Graph& graph);

// Dataset-specific validity.
//   planar: connected AND planar.
//   sbm:    greedy-modularity communities number 2..5 and each has 20..40
//           nodes. This stands in for the reference statistical test, so
//           reports carry a "modularity-approximation" flag.
bool validity(const Graph& graph, DatasetKind kind);

// True when `kind` has a validity notion at all.
bool supports_validity(DatasetKind kind);

}  // namespace gbd
