// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "gbd/diffusion.hpp"
#include "gbd/errors.hpp"
#include "gbd/preconditioning.hpp"
#include "gbd/samplers.hpp"
#include "gbd/special_functions.hpp"
#include "oracles.hpp"

using namespace gbd;

namespace {

// Monte Carlo draws of g_t for a two-valued or uniform g_0 source.
template <typename SourceFn>
void simulate(SourceFn&& draw_g0, double alpha_t, double eta, long n, bool logit_domain,
              RngStream& rng, oracle::MomentAccumulator& acc) {
  for (long i = 0; i < n; ++i) {
    const double g0 = draw_g0(rng);
    const double a = eta * alpha_t * g0;
    const double b = eta * (1.0 - alpha_t * g0);
    const double value = logit_domain ? sample_logit_beta(a, b, rng) : sample_beta(a, b, rng);
    acc.add(value);
  }
}

}  // namespace

TEST_SUITE("original_moments") {
  TEST_CASE("binary p=1 degenerates to the conditional-beta variance") {
    const Moments m = binary_moments(1.0, 0.09, 0.99, 0.7, 30.0);
    CHECK(m.mean == doctest::Approx(0.7 * 0.99).epsilon(1e-14));
    CHECK(m.var == doctest::Approx((m.mean - m.mean * m.mean) / 31.0).epsilon(1e-12));
  }

  TEST_CASE("binary moments match Monte Carlo") {
    const double p = 0.117, lo = 0.09, hi = 0.99, alpha = 0.7, eta = 30.0;
    const Moments m = binary_moments(p, lo, hi, alpha, eta);
    RngStream rng(404);
    oracle::MomentAccumulator acc;
    simulate([&](RngStream& r) { return r.next_double() < p ? hi : lo; }, alpha, eta, 1000000,
             false, rng, acc);
    CHECK(std::abs(acc.mean() - m.mean) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - m.var) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("alpha -> 0 limit sends both moments to zero") {
    const Moments m = binary_moments(0.5, 0.09, 0.99, 0.0, 30.0);
    CHECK(m.mean == 0.0);
    CHECK(m.var == 0.0);
  }

  TEST_CASE("uniform moments: linearity in alpha and Monte Carlo") {
    const Moments m1 = uniform_moments(0.09, 0.99, 0.1, 30.0);
    const Moments m2 = uniform_moments(0.09, 0.99, 0.2, 30.0);
    CHECK(m2.mean / m1.mean == doctest::Approx(2.0).epsilon(1e-12));

    const Moments m = uniform_moments(0.09, 0.99, 0.5, 30.0);
    RngStream rng(405);
    oracle::MomentAccumulator acc;
    simulate([](RngStream& r) { return 0.09 + 0.9 * r.next_double(); }, 0.5, 30.0, 1000000,
             false, rng, acc);
    CHECK(std::abs(acc.mean() - m.mean) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - m.var) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("uniform degenerate width approaches the binary p=1 variance") {
    const double eps = 1e-9;
    const Moments narrow = uniform_moments(0.5, 0.5 + eps, 0.6, 25.0);
    const Moments point = binary_moments(1.0, 0.5, 0.5, 0.6, 25.0);
    CHECK(narrow.mean == doctest::Approx(point.mean).epsilon(1e-8));
    CHECK(narrow.var == doctest::Approx(point.var).epsilon(1e-6));
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(uniform_moments(0.9, 0.1, 0.5, 30.0), std::domain_error);
    CHECK_THROWS_AS(binary_moments(1.5, 0.1, 0.9, 0.5, 30.0), std::domain_error);
  }
}

TEST_SUITE("logit_moments") {
  TEST_CASE("binary p=1: variance reduces to the trigamma pair") {
    const double eta = 30.0, alpha = 0.7, hi = 0.99;
    const Moments m = logit_moments_binary(1.0, 0.09, hi, alpha, eta);
    const double expected = trigamma(eta * alpha * hi) + trigamma(eta * (1.0 - alpha * hi));
    CHECK(m.var == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("binary moments match Monte Carlo in the logit domain") {
    const double p = 0.117, lo = 0.09, hi = 0.99, alpha = 0.7, eta = 30.0;
    const Moments m = logit_moments_binary(p, lo, hi, alpha, eta);
    RngStream rng(406);
    oracle::MomentAccumulator acc;
    simulate([&](RngStream& r) { return r.next_double() < p ? hi : lo; }, alpha, eta, 1000000,
             true, rng, acc);
    CHECK(std::abs(acc.mean() - m.mean) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - m.var) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("relabeling symmetry: p <-> 1-p with swapped outcomes") {
    const Moments a = logit_moments_binary(0.3, 0.2, 0.8, 0.5, 20.0);
    const Moments b = logit_moments_binary(0.7, 0.8, 0.2, 0.5, 20.0);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
    CHECK(a.var == doctest::Approx(b.var).epsilon(1e-12));
  }

  TEST_CASE("uniform: trapezoid refinement converges") {
    const Moments k3 = logit_moments_uniform(0.09, 0.99, 0.5, 30.0, 1000);
    const Moments k4 = logit_moments_uniform(0.09, 0.99, 0.5, 30.0, 10000);
    CHECK(std::abs(k3.var - k4.var) <= 1e-6 * std::abs(k4.var));
    // Monotone-shrinking improvement between successive doublings.
    double prev = std::abs(logit_moments_uniform(0.09, 0.99, 0.5, 30.0, 50).var -
                           logit_moments_uniform(0.09, 0.99, 0.5, 30.0, 25).var);
    for (int k = 100; k <= 800; k *= 2) {
      const double cur = std::abs(logit_moments_uniform(0.09, 0.99, 0.5, 30.0, k).var -
                                  logit_moments_uniform(0.09, 0.99, 0.5, 30.0, k / 2).var);
      CHECK(cur <= prev + 1e-15);
      prev = cur;
    }
  }

  TEST_CASE("uniform moments match Monte Carlo in the logit domain") {
    const Moments m = logit_moments_uniform(0.09, 0.99, 0.5, 30.0, 2000);
    RngStream rng(407);
    oracle::MomentAccumulator acc;
    simulate([](RngStream& r) { return 0.09 + 0.9 * r.next_double(); }, 0.5, 30.0, 1000000,
             true, rng, acc);
    CHECK(std::abs(acc.mean() - m.mean) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - m.var) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("near-degenerate support keeps the variance guard nonnegative") {
    const Moments m = logit_moments_uniform(0.5, 0.5 + 1e-12, 0.5, 30.0, 100);
    CHECK(std::isfinite(m.var));
    CHECK(m.var >= 0.0);
  }

  TEST_CASE("K below 2 rejected") {
    CHECK_THROWS_AS(logit_moments_uniform(0.1, 0.9, 0.5, 30.0, 1), ConfigError);
  }
}

TEST_SUITE("standardize") {
  TEST_CASE("forward-marginal entries standardize to mean 0, variance 1") {
    const NoiseSchedule schedule = NoiseSchedule::make();
    const int t = 250;
    const double alpha = schedule.alpha(t);
    const double p = 0.3, eta = 30.0;
    ChannelSource adj_src{true, p, 0.09, 0.99};
    const PrecondStats stats = PrecondStats::build(Domain::kOriginal, schedule, adj_src, {}, eta);
    RngStream rng(408);
    oracle::MomentAccumulator acc;
    const Moments& m = stats.adjacency_at(t);
    for (int i = 0; i < 1000000; ++i) {
      const double g0 = rng.next_double() < p ? 0.99 : 0.09;
      const double x = sample_beta(eta * alpha * g0, eta * (1.0 - alpha * g0), rng);
      acc.add((x - m.mean) / std::sqrt(m.var));
    }
    CHECK(std::abs(acc.mean()) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - 1.0) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("identity stats pass values through; masked entries become zero") {
    DiffusionState s;
    s.t = 1;
    s.domain = Domain::kOriginal;
    s.adjacency_values = Eigen::MatrixXd::Constant(3, 3, 0.25);
    s.feature_values = Eigen::MatrixXd::Constant(3, 2, 0.75);
    s.node_mask = {true, true, false};
    const PrecondStats stats = PrecondStats::identity(Domain::kOriginal, 4, 2);
    const auto [adj, feat] = standardize(s, stats);
    CHECK(adj(0, 1) == 0.25);
    CHECK(feat(1, 1) == 0.75);
    CHECK(adj(0, 2) == 0.0);
    CHECK(adj(2, 2) == 0.0);
    CHECK(feat(2, 0) == 0.0);
  }

  TEST_CASE("domain mismatch rejected") {
    DiffusionState s;
    s.t = 1;
    s.domain = Domain::kLogit;
    s.adjacency_values = Eigen::MatrixXd::Zero(2, 2);
    s.feature_values = Eigen::MatrixXd::Zero(2, 1);
    const PrecondStats stats = PrecondStats::identity(Domain::kOriginal, 4, 1);
    CHECK_THROWS_AS(standardize(s, stats), ConfigError);
  }
}
