// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>

#include "gbd/beta_kl.hpp"
#include "gbd/rng.hpp"
#include "gbd/samplers.hpp"
#include "gbd/schedule.hpp"
#include "gbd/special_functions.hpp"
#include "oracles.hpp"

using namespace gbd;

TEST_SUITE("special_functions") {
  TEST_CASE("digamma recurrence psi(x+1) - psi(x) = 1/x") {
    for (double x : {0.1, 1.0, 7.3}) {
      const double lhs = digamma(x + 1.0) - digamma(x);
      CHECK(std::abs(lhs - 1.0 / x) <= 1e-10 * (1.0 / x));
    }
  }

  TEST_CASE("trigamma(1) equals pi^2/6 against series oracle") {
    // Partial sum of 1/k^2 plus an Euler-Maclaurin tail correction.
    const long n = 1000000;
    long double s = 0.0;
    for (long k = n; k >= 1; --k) s += 1.0L / (static_cast<long double>(k) * k);
    const long double nl = static_cast<long double>(n);
    const double series = static_cast<double>(s + 1.0L / nl - 1.0L / (2.0L * nl * nl) +
                                              1.0L / (6.0L * nl * nl * nl));
    CHECK(std::abs(trigamma(1.0) - series) <= 1e-10);
    CHECK(std::abs(trigamma(1.0) - M_PI * M_PI / 6.0) <= 1e-10);
  }

  TEST_CASE("digamma(1) against central difference of log_gamma") {
    const double h = 1e-6;
    const double fd = (log_gamma(1.0 + h) - log_gamma(1.0 - h)) / (2.0 * h);
    CHECK(std::abs(digamma(1.0) - fd) <= 1e-7);
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
  }

  TEST_CASE("relative accuracy across the domain against boost") {
    for (double e = -6.0; e <= 6.0; e += 0.25) {
      const double x = std::pow(10.0, e);
      const double dg = boost::math::digamma(x);
      const double tg = boost::math::trigamma(x);
      CHECK(std::abs(digamma(x) - dg) <= 1e-10 * std::max(1.0, std::abs(dg)));
      CHECK(std::abs(trigamma(x) - tg) <= 1e-10 * std::max(1.0, std::abs(tg)));
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-1.0), std::domain_error);
    CHECK_THROWS_AS(trigamma(0.0), std::domain_error);
  }
}

TEST_SUITE("schedule") {
  TEST_CASE("pinned endpoint and midpoint values") {
    const NoiseSchedule s = NoiseSchedule::make();
    CHECK(s.alpha(0) == doctest::Approx(0.9999546021312976).epsilon(1e-12));
    CHECK(s.alpha(1000) == doctest::Approx(2.2603242979035746e-06).epsilon(1e-9));
    CHECK(s.alpha(500) == doctest::Approx(0.18242552380635635).epsilon(1e-12));
  }

  TEST_CASE("strictly decreasing, bounded") {
    for (int T : {1, 10, 1000}) {
      const NoiseSchedule s = NoiseSchedule::make(10.0, -13.0, T);
      CHECK(s.alpha(0) < 1.0);
      CHECK(s.alpha(T) > 0.0);
      for (int t = 1; t <= T; ++t) CHECK(s.alpha(t - 1) > s.alpha(t));
    }
    const NoiseSchedule other = NoiseSchedule::make(4.0, -2.0, 64);
    for (int t = 1; t <= 64; ++t) CHECK(other.alpha(t - 1) > other.alpha(t));
  }

  TEST_CASE("bounds and invalid construction") {
    const NoiseSchedule s = NoiseSchedule::make();
    CHECK_THROWS_AS(s.alpha(-1), std::out_of_range);
    CHECK_THROWS_AS(s.alpha(1001), std::out_of_range);
    CHECK_THROWS(NoiseSchedule::make(1.0, 1.0, 10));
  }
}

TEST_SUITE("rng") {
  TEST_CASE("identical seed, identical sequence; derived streams differ") {
    RngStream a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    bool any_diff = false;
    RngStream a2(42);
    for (int i = 0; i < 100; ++i) any_diff |= (a2.next_u64() != c.next_u64());
    CHECK(any_diff);
    RngStream d1 = RngStream(7).derive(1);
    RngStream d2 = RngStream(7).derive(2);
    CHECK(d1.next_u64() != d2.next_u64());
  }

  TEST_CASE("state restore resumes the exact sequence") {
    RngStream a(123);
    for (int i = 0; i < 10; ++i) a.next_double();
    const auto key = a.key();
    const auto counter = a.counter();
    const double expected = a.next_double();
    RngStream b;
    b.restore(key, counter);
    CHECK(b.next_double() == expected);
  }
}

TEST_SUITE("samplers") {
  TEST_CASE("gamma shape 5: mean and variance within 3 sigma") {
    RngStream rng(1001);
    oracle::MomentAccumulator acc;
    for (int i = 0; i < 1000000; ++i) acc.add(sample_gamma(5.0, rng));
    CHECK(std::abs(acc.mean() - 5.0) <= 3.0 * acc.mean_stderr());
    CHECK(std::abs(acc.variance() - 5.0) <= 3.0 * acc.variance_stderr());
  }

  TEST_CASE("gamma shape 1 is Exponential(1): one-sample KS at level 0.001") {
    RngStream rng(1002);
    std::vector<double> draws(100000);
    for (double& d : draws) d = sample_gamma(1.0, rng);
    const double stat =
        oracle::ks_one_sample(draws, [](double x) { return 1.0 - std::exp(-x); });
    CHECK(stat < std::sqrt(-0.5 * std::log(0.0005)) / std::sqrt(100000.0));
  }

  TEST_CASE("log-gamma at shape 1e-5 stays finite; exp never NaN") {
    RngStream rng(1003);
    for (int i = 0; i < 1000000; ++i) {
      const double lg = sample_log_gamma(1e-5, rng);
      CHECK(std::isfinite(lg));
      CHECK(!std::isnan(std::exp(lg)));
    }
  }

  TEST_CASE("beta moments: symmetric and asymmetric shapes") {
    RngStream rng(1004);
    oracle::MomentAccumulator sym;
    for (int i = 0; i < 1000000; ++i) sym.add(sample_beta(3.0, 3.0, rng));
    CHECK(std::abs(sym.mean() - 0.5) <= 3.0 * sym.mean_stderr());

    oracle::MomentAccumulator asym;
    for (int i = 0; i < 1000000; ++i) asym.add(sample_beta(2.0, 6.0, rng));
    CHECK(std::abs(asym.mean() - 0.25) <= 3.0 * asym.mean_stderr());
    const double expected_var = 2.0 * 6.0 / (64.0 * 9.0);
    CHECK(std::abs(asym.variance() - expected_var) <= 3.0 * asym.variance_stderr());
  }

  TEST_CASE("logit-beta stability at extreme shapes") {
    RngStream rng(1005);
    for (int i = 0; i < 1000000; ++i) {
      const double z = sample_logit_beta(1e-4, 30.0, rng);
      CHECK(std::isfinite(z));
      const double x = clamp_unit(sigmoid(z));
      CHECK(x > 0.0);
      CHECK(x < 1.0);
    }
  }

  TEST_CASE("two routes agree in distribution: two-sample KS at level 0.001") {
    const int n = 100000;
    const double crit = oracle::ks_critical(0.001, n, n);
    int pair_idx = 0;
    for (auto [a, b] : {std::pair<double, double>{0.5, 0.5}, {5.0, 1.0}, {0.01, 30.0}}) {
      RngStream r1(2000 + pair_idx);
      RngStream r2(3000 + pair_idx);
      ++pair_idx;
      std::vector<double> via_beta(n), via_logit(n);
      for (int i = 0; i < n; ++i) via_beta[static_cast<std::size_t>(i)] = sample_beta(a, b, r1);
      for (int i = 0; i < n; ++i) {
        via_logit[static_cast<std::size_t>(i)] = sigmoid(sample_logit_beta(a, b, r2));
      }
      CHECK(oracle::ks_two_sample(via_beta, via_logit) < crit);
    }
  }

  TEST_CASE("domain errors") {
    RngStream rng(1);
    CHECK_THROWS_AS(sample_gamma(0.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_beta(-1.0, 2.0, rng), std::domain_error);
    CHECK_THROWS_AS(sample_logit_beta(1.0, 0.0, rng), std::domain_error);
  }
}

TEST_SUITE("beta_kl") {
  TEST_CASE("identical distributions give exactly zero") {
    CHECK(kl_beta(2.5, 7.0, 2.5, 7.0) == 0.0);
  }

  TEST_CASE("matches adaptive quadrature") {
    const double q1 = oracle::kl_beta_quadrature(2.0, 3.0, 3.0, 2.0);
    CHECK(std::abs(kl_beta(2.0, 3.0, 3.0, 2.0) - q1) <= 1e-6 * std::abs(q1));
    const double q2 = oracle::kl_beta_quadrature(0.01, 30.0, 0.02, 30.0);
    CHECK(std::abs(kl_beta(0.01, 30.0, 0.02, 30.0) - q2) <= 1e-5 * std::abs(q2));
    CHECK(std::isfinite(kl_beta(0.01, 30.0, 0.02, 30.0)));
  }

  TEST_CASE("nonnegative on random parameter quadruples in [1e-3, 1e3]") {
    RngStream rng(77);
    for (int i = 0; i < 10000; ++i) {
      auto draw = [&rng] { return std::pow(10.0, -3.0 + 6.0 * rng.next_double()); };
      CHECK(kl_beta(draw(), draw(), draw(), draw()) >= -1e-12);
    }
  }

  TEST_CASE("KL equals the Bregman form of ln Beta") {
    RngStream rng(78);
    for (int i = 0; i < 1000; ++i) {
      auto draw = [&rng] { return std::pow(10.0, -2.0 + 4.0 * rng.next_double()); };
      const double a1 = draw(), b1 = draw(), a2 = draw(), b2 = draw();
      const double kl = kl_beta(a1, b1, a2, b2);
      const double breg = bregman_log_beta(a2, b2, a1, b1);
      CHECK(std::abs(kl - breg) <= 1e-8 * std::max(1e-30, std::abs(kl)));
    }
  }

  TEST_CASE("domain errors") {
    CHECK_THROWS_AS(kl_beta(0.0, 1.0, 1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(bregman_log_beta(1.0, -2.0, 1.0, 1.0), std::domain_error);
  }
}
