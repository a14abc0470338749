// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "gbd/diffusion.hpp"
#include "gbd/errors.hpp"
#include "gbd/special_functions.hpp"
#include "oracles.hpp"

using namespace gbd;

namespace {

DiffusionState make_state(const Eigen::MatrixXd& adj, const Eigen::MatrixXd& feat, int t,
                          Domain domain = Domain::kOriginal) {
  DiffusionState s;
  s.adjacency_values = adj;
  s.feature_values = feat;
  s.t = t;
  s.domain = domain;
  return s;
}

DiffusionState constant_state(int n, double adj_value, double feat_value, int t) {
  Eigen::MatrixXd adj = Eigen::MatrixXd::Constant(n, n, adj_value);
  Eigen::MatrixXd feat = Eigen::MatrixXd::Constant(n, 1, feat_value);
  return make_state(adj, feat, t);
}

}  // namespace

TEST_SUITE("forward") {
  TEST_CASE("marginal sample: support, symmetry, mask") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(4, 30.0);
    RngStream rng(21);
    DiffusionState g0 = constant_state(4, 0.99, 0.5, 0);
    g0.node_mask = {true, true, true, false};
    const DiffusionState g_t = forward_marginal_sample(g0, 500, schedule, eta, rng);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(g_t.adjacency_values(i, j) > 0.0);
        CHECK(g_t.adjacency_values(i, j) < 1.0);
        CHECK(g_t.adjacency_values(i, j) == g_t.adjacency_values(j, i));
      }
    }
    CHECK(g_t.adjacency_values(3, 0) == 0.0);
    CHECK(g_t.feature_values(3, 0) == 0.0);
  }

  TEST_CASE("marginal moments at a pinned cell") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const int t = 500;
    const double alpha = schedule.alpha(t);
    const double g0 = 0.99, eta = 30.0;
    const ConcentrationField field = ConcentrationField::uniform(1, eta);
    RngStream rng(22);
    oracle::MomentAccumulator acc;
    DiffusionState base = constant_state(1, g0, 0.5, 0);
    for (int i = 0; i < 200000; ++i) {
      acc.add(forward_marginal_sample(base, t, schedule, field, rng).adjacency_values(0, 0));
    }
    const double mean = alpha * g0;
    const double var = mean * (1.0 - mean) / (eta + 1.0);
    CHECK(std::abs(acc.mean() - mean) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - var) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("forward_step thins and composes to the marginal") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(2, 30.0);
    RngStream rng(23);
    const DiffusionState g0 = constant_state(2, 0.99, 0.5, 0);

    DiffusionState prev = g0;
    for (int t = 1; t <= 10; ++t) {
      const DiffusionState next = forward_step(prev, g0, t, schedule, eta, rng);
      CHECK((next.adjacency_values.array() <= prev.adjacency_values.array() + 1e-15).all());
      CHECK((next.feature_values.array() <= prev.feature_values.array() + 1e-15).all());
      prev = next;
    }

    // Chained steps reproduce the marginal mean at t* = 200 within 3 sigma;
    // also exercised at the sparse value b_A = 0.09.
    const int t_star = 200;
    for (double v0 : {0.99, 0.09}) {
      oracle::MomentAccumulator acc;
      const DiffusionState start = constant_state(1, v0, 0.5, 0);
      const ConcentrationField f1 = ConcentrationField::uniform(1, 30.0);
      for (int rep = 0; rep < 20000; ++rep) {
        DiffusionState s = start;
        for (int t = 1; t <= t_star; ++t) s = forward_step(s, start, t, schedule, f1, rng);
        acc.add(s.adjacency_values(0, 0));
      }
      CHECK(std::abs(acc.mean() - schedule.alpha(t_star) * v0) <= 3.0 * acc.mean_stderr());
    }
  }

  TEST_CASE("degenerate schedule step rejected") {
    NoiseSchedule s = NoiseSchedule::make(10.0, -13.0, 4);
    s.alphas[1] = s.alphas[0];
    const ConcentrationField eta = ConcentrationField::uniform(2, 30.0);
    RngStream rng(24);
    const DiffusionState g0 = constant_state(2, 0.5, 0.5, 0);
    CHECK_THROWS_AS(forward_step(g0, g0, 1, s, eta, rng), std::domain_error);
  }

  TEST_CASE("values outside (0,1) rejected") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(2, 30.0);
    RngStream rng(25);
    const DiffusionState bad = constant_state(2, 1.0, 0.5, 0);
    CHECK_THROWS_AS(forward_marginal_sample(bad, 5, schedule, eta, rng), std::domain_error);
  }
}

TEST_SUITE("reverse") {
  TEST_CASE("thickening monotonicity and the P=0 edge") {
    CHECK(thicken(0.3, 0.0) == 0.3);
    CHECK(thicken(0.3, 0.5) == doctest::Approx(0.65));
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(3, 30.0);
    RngStream rng(26);
    const DiffusionState g_t = constant_state(3, 0.2, 0.3, 500);
    const Eigen::MatrixXd a_hat = Eigen::MatrixXd::Constant(3, 3, 0.9);
    const Eigen::MatrixXd x_hat = Eigen::MatrixXd::Constant(3, 1, 0.6);
    const DiffusionState out = reverse_step(g_t, a_hat, x_hat, 500, schedule, eta, rng);
    CHECK((out.adjacency_values.array() >= g_t.adjacency_values.array()).all());
    CHECK((out.feature_values.array() >= g_t.feature_values.array()).all());
    CHECK((out.adjacency_values - out.adjacency_values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("exact-posterior reverse matches the forward marginal mean") {
    const NoiseSchedule schedule = NoiseSchedule::make(10.0, -13.0, 100);
    const double g0 = 0.99, eta = 30.0;
    const ConcentrationField field = ConcentrationField::uniform(1, eta);
    const Eigen::MatrixXd a_hat = Eigen::MatrixXd::Constant(1, 1, g0);
    const Eigen::MatrixXd x_hat = Eigen::MatrixXd::Constant(1, 1, 0.5);
    const DiffusionState base = constant_state(1, g0, 0.5, 0);
    RngStream rng(27);
    const int t_check = 50;
    oracle::MomentAccumulator acc;
    for (int rep = 0; rep < 20000; ++rep) {
      DiffusionState s = forward_marginal_sample(base, schedule.T, schedule, field, rng);
      for (int t = schedule.T; t > t_check; --t) {
        s = reverse_step(s, a_hat, x_hat, t, schedule, field, rng);
      }
      acc.add(s.adjacency_values(0, 0));
    }
    const double expected = schedule.alpha(t_check) * g0;
    CHECK(std::abs(acc.mean() - expected) <= 3.0 * acc.mean_stderr());
  }

  TEST_CASE("invalid predictions rejected") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(2, 30.0);
    RngStream rng(28);
    const DiffusionState g_t = constant_state(2, 0.2, 0.3, 500);
    const Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, 1.0);
    const Eigen::MatrixXd x_hat = Eigen::MatrixXd::Constant(2, 1, 0.6);
    CHECK_THROWS_AS(reverse_step(g_t, bad, x_hat, 500, schedule, eta, rng), std::domain_error);
  }
}

TEST_SUITE("logit_domain") {
  TEST_CASE("fixed-multiplier equivalence through sigmoid") {
    for (double g : {1e-6, 0.5, 1.0 - 1e-6}) {
      for (double p : {1e-8, 1e-3, 0.4, 0.97}) {
        const double direct = thicken(g, p);
        const double zg = std::log(g) - std::log1p(-g);
        const double zp = std::log(p) - std::log1p(-p);
        const double via_logit = sigmoid(thicken_logit(zg, zp));
        CHECK(std::abs(via_logit - direct) <= 1e-9);
      }
    }
  }

  TEST_CASE("limit P -> 0 leaves the state unchanged") {
    const double zg = 0.37;
    CHECK(thicken_logit(zg, -745.0) == doctest::Approx(zg).epsilon(1e-12));
  }

  TEST_CASE("extreme logits stay finite") {
    for (double zg : {-40.0, 40.0}) {
      for (double zp : {-40.0, 40.0}) {
        CHECK(std::isfinite(thicken_logit(zg, zp)));
      }
    }
  }

  TEST_CASE("logit reverse step stays finite and preserves symmetry") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const ConcentrationField eta = ConcentrationField::uniform(3, 30.0);
    RngStream rng(29);
    DiffusionState s = constant_state(3, 0.0, 0.0, 1000);
    s.domain = Domain::kLogit;
    s.adjacency_values = Eigen::MatrixXd::Constant(3, 3, -12.0);
    s.feature_values = Eigen::MatrixXd::Constant(3, 1, -12.0);
    const Eigen::MatrixXd a_hat = Eigen::MatrixXd::Constant(3, 3, 0.9);
    const Eigen::MatrixXd x_hat = Eigen::MatrixXd::Constant(3, 1, 0.6);
    for (int t = 1000; t > 990; --t) {
      s = reverse_step_logit(s, a_hat, x_hat, t, schedule, eta, rng);
      CHECK(s.adjacency_values.allFinite());
      CHECK((s.adjacency_values - s.adjacency_values.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_SUITE("ancestral") {
  TEST_CASE("constant oracle predictor recovers its target almost always") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const Graph target = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {0, 5}, {1, 4}});
    const TransformParams tp;
    const ConcentrationField eta = ConcentrationField::uniform(6, 30.0);
    Eigen::MatrixXd a_raw = target.adjacency.array() * 0.98 + 0.01;
    Eigen::MatrixXd x_raw = Eigen::MatrixXd::Constant(6, 1, 0.5);
    const Predictor oracle_predictor = [&](const DiffusionState&, int) {
      return std::make_pair(a_raw, x_raw);
    };
    AncestralConfig cfg;
    cfg.domain = Domain::kOriginal;
    cfg.prior_mean_adj = 0.3;
    cfg.feature_dim = 1;
    RngStream rng(30);
    int hits = 0;
    const int runs = 200;
    for (int r = 0; r < runs; ++r) {
      const Graph sample = ancestral_sample(oracle_predictor, 6, schedule, eta, tp, cfg, rng);
      if ((sample.adjacency - target.adjacency).cwiseAbs().maxCoeff() == 0.0) ++hits;
    }
    CHECK(hits >= static_cast<int>(0.95 * runs));
  }

  TEST_CASE("T=1 still yields a valid graph; logit and original domains") {
    const NoiseSchedule schedule = NoiseSchedule::make(10.0, -13.0, 1);
    const TransformParams tp;
    const ConcentrationField eta = ConcentrationField::uniform(4, 30.0);
    const Predictor p = [](const DiffusionState& s, int) {
      return std::make_pair(Eigen::MatrixXd::Constant(s.n(), s.n(), 0.5),
                            Eigen::MatrixXd::Constant(s.n(), 1, 0.5));
    };
    for (Domain d : {Domain::kOriginal, Domain::kLogit}) {
      AncestralConfig cfg;
      cfg.domain = d;
      cfg.prior_mean_adj = 0.3;
      cfg.feature_dim = 1;
      RngStream rng(31);
      const Graph g = ancestral_sample(p, 4, schedule, eta, tp, cfg, rng);
      g.validate();
    }
  }

  TEST_CASE("structural invariants hold for random predictors") {
    const NoiseSchedule schedule = NoiseSchedule::make(10.0, -13.0, 10);
    const TransformParams tp;
    const ConcentrationField eta = ConcentrationField::uniform(5, 30.0);
    RngStream seed_rng(32);
    for (int rep = 0; rep < 100; ++rep) {
      const double level = 0.05 + 0.9 * seed_rng.next_double();
      const Predictor p = [level](const DiffusionState& s, int) {
        return std::make_pair(Eigen::MatrixXd::Constant(s.n(), s.n(), level),
                              Eigen::MatrixXd::Constant(s.n(), 1, level));
      };
      AncestralConfig cfg;
      cfg.domain = rep % 2 == 0 ? Domain::kLogit : Domain::kOriginal;
      cfg.prior_mean_adj = 0.3;
      cfg.feature_dim = 1;
      RngStream rng(100 + static_cast<std::uint64_t>(rep));
      const Graph g = ancestral_sample(p, 5, schedule, eta, tp, cfg, rng);
      g.validate();  // symmetric, zero-diagonal
    }
  }

  TEST_CASE("out-of-range predictor output raises a contract error") {
    const NoiseSchedule schedule = NoiseSchedule::make(10.0, -13.0, 3);
    const TransformParams tp;
    const ConcentrationField eta = ConcentrationField::uniform(3, 30.0);
    const Predictor bad = [](const DiffusionState& s, int) {
      return std::make_pair(Eigen::MatrixXd::Constant(s.n(), s.n(), 1.0),
                            Eigen::MatrixXd::Constant(s.n(), 1, 0.5));
    };
    AncestralConfig cfg;
    cfg.domain = Domain::kOriginal;
    cfg.prior_mean_adj = 0.3;
    cfg.feature_dim = 1;
    RngStream rng(33);
    CHECK_THROWS_AS(ancestral_sample(bad, 3, schedule, eta, tp, cfg, rng), NumericError);
  }
}
