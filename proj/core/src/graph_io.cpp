// SPDX-License-Identifier: Apache-2.0
#include "gbd/graph_io.hpp"

#include <fstream>

#include <json.hpp>

#include "gbd/errors.hpp"

namespace gbd {

using ordered_json = nlohmann::ordered_json;

std::string graph_to_json_line(const Graph& g) {
  ordered_json j;
  j["n"] = g.n;
  ordered_json edges = ordered_json::array();
  for (const auto& [u, v] : g.edge_list()) {
    edges.push_back(ordered_json::array({u, v}));
  }
  j["edges"] = std::move(edges);
  if (g.features.cols() > 0) {
    ordered_json feats = ordered_json::array();
    for (int i = 0; i < g.n; ++i) {
      ordered_json row = ordered_json::array();
      for (int d = 0; d < g.features.cols(); ++d) row.push_back(g.features(i, d));
      feats.push_back(std::move(row));
    }
    j["features"] = std::move(feats);
  }
  return j.dump();
}

Graph graph_from_json_line(const std::string& line, long line_number) {
  ordered_json j;
  try {
    j = ordered_json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
  }
  if (!j.is_object() || !j.contains("n") || !j.contains("edges")) {
    throw ParseError("record must be an object with \"n\" and \"edges\"", line_number);
  }
  const int n = j["n"].get<int>();
  if (n < 1) throw ParseError("n must be >= 1", line_number);
  Graph g;
  g.n = n;
  g.adjacency = Eigen::MatrixXd::Zero(n, n);
  g.features = Eigen::MatrixXd::Zero(n, 0);
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a [u, v] pair", line_number);
    const int u = e[0].get<int>();
    const int v = e[1].get<int>();
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("edge endpoint out of range", line_number);
    if (u >= v) throw ParseError("edges must satisfy u < v (upper triangle)", line_number);
    if (g.adjacency(u, v) != 0.0) throw ParseError("duplicate edge", line_number);
    g.adjacency(u, v) = 1.0;
    g.adjacency(v, u) = 1.0;
  }
  if (j.contains("features")) {
    const auto& feats = j["features"];
    if (!feats.is_array() || static_cast<int>(feats.size()) != n) {
      throw ParseError("features must have one row per node", line_number);
    }
    const int d = feats.empty() ? 0 : static_cast<int>(feats[0].size());
    g.features = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(feats[static_cast<std::size_t>(i)].size()) != d) {
        throw ParseError("ragged feature rows", line_number);
      }
      for (int k = 0; k < d; ++k) {
        const double x = feats[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)].get<double>();
        if (!(x >= 0.0 && x <= 1.0)) throw ParseError("feature entry outside [0,1]", line_number);
        g.features(i, k) = x;
      }
    }
  }
  return g;
}

void save_graphs(const std::vector<Graph>& graphs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  for (const Graph& g : graphs) {
    out << graph_to_json_line(g) << "\n";
  }
  if (!out) throw ConfigError("write failed: " + path);
}

std::vector<Graph> load_graphs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  std::vector<Graph> graphs;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    graphs.push_back(graph_from_json_line(line, line_number));
  }
  return graphs;
}

}  // namespace gbd
