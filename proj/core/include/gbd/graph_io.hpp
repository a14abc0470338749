// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "gbd/graph.hpp"

namespace gbd {

// Line-delimited graph file: one record per line,
//   {"n": int, "edges": [[u,v],...] with u < v, "features": [[...],...]}
// The features key is omitted when a graph carries none. Key order is fixed
// for reproducible diffs. Indices are 0-based.
void save_graphs(const std::vector<Graph>& graphs, const std::string& path);

// Throws ParseError (with line number) on malformed records, including
// out-of-range indices, u >= v, duplicates, or features outside [0,1].
std::vector<Graph> load_graphs(const std::string& path);

std::string graph_to_json_line(const Graph& g);
Graph graph_from_json_line(const std::string& line, long line_number);

}  // namespace gbd
