// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "gbd/graph.hpp"
#include "gbd/state.hpp"

namespace gbd {

enum class ModulationKind { kNone, kDegree, kBetweenness };

ModulationKind modulation_kind_from_string(const std::string& name);
std::string to_string(ModulationKind kind);

// Maps normalized per-node centrality to one of several concentration levels.
// `levels` and `thresholds` are parallel and descending; centrality c lands
// in level i when c is in (thresholds[i+1], thresholds[i]], with the last
// interval closed at its lower end.
struct ModulationStrategy {
  ModulationKind kind = ModulationKind::kNone;
  std::vector<double> levels = {10000.0, 100.0, 30.0, 10.0};
  std::vector<double> thresholds = {1.0, 0.8, 0.4, 0.1};
  double default_eta = 30.0;

  void validate() const;
};

// Degree centrality: C_d(u) = deg(u).
Eigen::VectorXd degree_centrality(const Graph& graph);

// Exact betweenness centrality over unordered node pairs:
// C_b(u) = sum over pairs {s,t}, s != u != t, of g_st(u) / g_st,
// where g_st counts shortest paths and g_st(u) those passing through u.
// Disconnected pairs contribute zero.
Eigen::VectorXd betweenness_centrality(const Graph& graph);

// Builds the per-edge / per-node concentration field. Centrality is divided
// by its in-graph maximum before threshold mapping; edges use the maximum of
// the endpoint centralities. kind == none yields a uniform field at
// default_eta.
ConcentrationField assign_eta(const Graph& graph, const ModulationStrategy& strategy);

}  // namespace gbd
