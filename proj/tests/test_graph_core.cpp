// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "gbd/dataset.hpp"
#include "gbd/errors.hpp"
#include "gbd/graph.hpp"
#include "gbd/graph_io.hpp"
#include "gbd/node_features.hpp"
#include "gbd/validity.hpp"
#include "oracles.hpp"

using namespace gbd;

namespace {

Graph random_graph(int n, double p, RngStream& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.next_double() < p) edges.emplace_back(u, v);
    }
  }
  return make_graph(n, edges);
}

std::string temp_path(const char* tag) {
  return std::string("gbd_test_") + tag + ".jsonl";
}

}  // namespace

TEST_SUITE("transform") {
  TEST_CASE("pinned scale-shift values") {
    Graph g = make_graph(2, {{0, 1}});
    g.features = Eigen::MatrixXd::Zero(2, 1);
    TransformParams tp;
    const DiffusionState s = transform(g, tp);
    CHECK(s.adjacency_values(0, 1) == doctest::Approx(0.99).epsilon(1e-15));
    Graph empty = make_graph(2, {});
    empty.features = Eigen::MatrixXd::Zero(2, 1);
    const DiffusionState s2 = transform(empty, tp);
    CHECK(s2.adjacency_values(0, 1) == doctest::Approx(0.09).epsilon(1e-15));
  }

  TEST_CASE("parameter validation") {
    TransformParams bad;
    bad.w_A = 1.0;
    bad.b_A = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    TransformParams near_identity;
    near_identity.w_A = 0.999;
    near_identity.b_A = 0.0005;
    near_identity.w_X = 0.999;
    near_identity.b_X = 0.0005;
    near_identity.validate();
    Graph g = make_graph(2, {{0, 1}});
    g.features = Eigen::MatrixXd::Constant(2, 1, 0.25);
    const DiffusionState s = transform(g, near_identity);
    CHECK(s.feature_values(0, 0) == doctest::Approx(0.999 * 0.25 + 0.0005).epsilon(1e-14));
  }

  TEST_CASE("quantization thresholds and boundary") {
    TransformParams tp;
    Eigen::MatrixXd adj(2, 2);
    adj << tp.b_A, 0.99, 0.99, tp.b_A;
    Eigen::MatrixXd feats = Eigen::MatrixXd::Constant(2, 1, 0.5);
    Graph g = inverse_transform_quantize(adj, feats, tp, 0.5);
    CHECK(g.adjacency(0, 1) == 1.0);
    adj(0, 1) = adj(1, 0) = 0.09;
    g = inverse_transform_quantize(adj, feats, tp, 0.5);
    CHECK(g.adjacency(0, 1) == 0.0);
    // 0.54 maps to exactly 0.5; the decision rule is >=.
    adj(0, 1) = adj(1, 0) = 0.54;
    g = inverse_transform_quantize(adj, feats, tp, 0.5);
    CHECK((0.54 - 0.09) / 0.9 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(g.adjacency(0, 1) == 1.0);
  }

  TEST_CASE("round trip is the identity on random graphs") {
    RngStream rng(5);
    for (int rep = 0; rep < 40; ++rep) {
      const int n = 2 + static_cast<int>(rng.next_u64() % 19);
      Graph g = random_graph(n, 0.4, rng);
      g.features = Eigen::MatrixXd::Zero(n, 2);
      for (int i = 0; i < n; ++i) {
        g.features(i, 0) = rng.next_double();
        g.features(i, 1) = rng.next_double() < 0.5 ? 0.0 : 1.0;
      }
      TransformParams tp;
      tp.w_A = 0.5 + 0.4 * rng.next_double();
      tp.b_A = (1.0 - tp.w_A) * rng.next_double() * 0.9 + 1e-3;
      tp.w_X = 0.5 + 0.4 * rng.next_double();
      tp.b_X = (1.0 - tp.w_X) * rng.next_double() * 0.9 + 1e-3;
      const DiffusionState s = transform(g, tp);
      const Graph back = inverse_transform_quantize(s.adjacency_values, s.feature_values, tp, 0.5);
      CHECK((back.adjacency - g.adjacency).cwiseAbs().maxCoeff() == 0.0);
      CHECK((back.features - g.features).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_SUITE("datasets") {
  TEST_CASE("community_small: size bounds and count") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kCommunitySmall;
    spec.count = 100;
    spec.seed = 11;
    const auto graphs = generate_dataset(spec);
    REQUIRE(graphs.size() == 100);
    for (const Graph& g : graphs) {
      CHECK(g.n >= 12);
      CHECK(g.n <= 20);
      g.validate();
    }
  }

  TEST_CASE("grid: degree bound 4 and node range") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kGrid;
    spec.count = 5;
    spec.seed = 12;
    for (const Graph& g : generate_dataset(spec)) {
      CHECK(g.n >= 100);
      CHECK(g.n <= 400);
      for (int v = 0; v < g.n; ++v) CHECK(g.degree(v) <= 4);
    }
  }

  TEST_CASE("sbm: within-block edge count matches the binomial expectation") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kSbm;
    spec.count = 1;
    spec.communities_min = 2;
    spec.communities_max = 2;
    spec.block_min = 20;
    spec.block_max = 20;
    // Expected within-block edges: 0.3 * 2 * C(20,2) = 114, binomial variance
    // 2 * 190 * 0.3 * 0.7 = 79.8; averaged over 200 seeds.
    double total = 0.0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
      spec.seed = static_cast<std::uint64_t>(s);
      const Graph g = generate_dataset(spec).front();
      double within = 0.0;
      for (int u = 0; u < 20; ++u) {
        for (int v = u + 1; v < 20; ++v) within += g.adjacency(u, v);
      }
      for (int u = 20; u < 40; ++u) {
        for (int v = u + 1; v < 40; ++v) within += g.adjacency(u, v);
      }
      total += within;
    }
    const double mean = total / seeds;
    const double sigma = std::sqrt(79.8 / seeds);
    CHECK(std::abs(mean - 114.0) <= 3.0 * sigma);
  }

  TEST_CASE("planar: Delaunay graphs are planar and connected") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kPlanar;
    spec.count = 8;
    spec.seed = 13;
    for (const Graph& g : generate_dataset(spec)) {
      CHECK(g.n == 64);
      CHECK(is_connected(g));
      CHECK(is_planar(g));
    }
  }

  TEST_CASE("determinism: same seed, byte-identical dataset") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kCommunitySmall;
    spec.count = 20;
    spec.seed = 99;
    const auto a = generate_dataset(spec);
    const auto b = generate_dataset(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(graph_to_json_line(a[i]) == graph_to_json_line(b[i]));
    }
  }

  TEST_CASE("unknown kind rejected") {
    CHECK_THROWS_AS(dataset_kind_from_string("molecules"), ConfigError);
  }
}

TEST_SUITE("graph_io") {
  TEST_CASE("round trip preserves graphs elementwise") {
    DatasetSpec spec;
    spec.kind = DatasetKind::kCommunitySmall;
    spec.count = 10;
    spec.seed = 3;
    auto graphs = generate_dataset(spec);
    apply_feature_scheme(graphs, FeatureScheme::kDegreeOnehot);
    const std::string path = temp_path("roundtrip");
    save_graphs(graphs, path);
    const auto loaded = load_graphs(path);
    REQUIRE(loaded.size() == graphs.size());
    for (std::size_t i = 0; i < graphs.size(); ++i) {
      CHECK((loaded[i].adjacency - graphs[i].adjacency).cwiseAbs().maxCoeff() == 0.0);
      CHECK((loaded[i].features - graphs[i].features).cwiseAbs().maxCoeff() == 0.0);
    }
    std::remove(path.c_str());
  }

  TEST_CASE("empty list round trips") {
    const std::string path = temp_path("empty");
    save_graphs({}, path);
    CHECK(load_graphs(path).empty());
    std::remove(path.c_str());
  }

  TEST_CASE("malformed records carry line numbers") {
    const std::string path = temp_path("badfile");
    {
      std::ofstream out(path);
      out << R"({"n": 3, "edges": [[0,1]]})" << "\n";
      out << R"({"n": 3, "edges": [[2,1]]})" << "\n";  // u >= v: asymmetric record
    }
    try {
      load_graphs(path);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
    std::remove(path.c_str());
  }

  TEST_CASE("out-of-range and duplicate edges rejected") {
    CHECK_THROWS_AS(graph_from_json_line(R"({"n": 2, "edges": [[0,5]]})", 1), ParseError);
    CHECK_THROWS_AS(graph_from_json_line(R"({"n": 3, "edges": [[0,1],[0,1]]})", 1), ParseError);
    CHECK_THROWS_AS(graph_from_json_line(R"({"n": 2, "edges": [[0,1]], "features": [[2.0],[0.0]]})", 1),
                    ParseError);
  }
}

TEST_SUITE("node_features") {
  TEST_CASE("degree_normalized on the path P3") {
    const Graph g = make_graph(3, {{0, 1}, {1, 2}});
    const Eigen::MatrixXd f = init_node_features(g, FeatureScheme::kDegreeNormalized);
    CHECK(f(1, 0) == doctest::Approx(1.0));
    CHECK(f(0, 0) == doctest::Approx(0.5));
    CHECK(f(2, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("degree one-hot on the star center") {
    const Graph g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
    const Eigen::MatrixXd f = init_node_features(g, FeatureScheme::kDegreeOnehot, 4);
    CHECK(f.cols() == 5);
    CHECK(f(0, 4) == 1.0);
    CHECK(f.row(0).sum() == 1.0);
    CHECK(f(1, 1) == 1.0);
  }

  TEST_CASE("betweenness on the triangle is all zeros") {
    const Graph g = make_graph(3, {{0, 1}, {1, 2}, {0, 2}});
    const Eigen::MatrixXd f = init_node_features(g, FeatureScheme::kBetweenness);
    CHECK(f.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("eigenvector features: deterministic, in range") {
    RngStream rng(17);
    const Graph g = random_graph(9, 0.5, rng);
    const Eigen::MatrixXd f1 = init_node_features(g, FeatureScheme::kEigenvectors);
    const Eigen::MatrixXd f2 = init_node_features(g, FeatureScheme::kEigenvectors);
    CHECK((f1 - f2).cwiseAbs().maxCoeff() == 0.0);
    CHECK(f1.cols() == 2);
    CHECK(f1.minCoeff() >= 0.0);
    CHECK(f1.maxCoeff() <= 1.0);
  }
}
