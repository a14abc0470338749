// SPDX-License-Identifier: Apache-2.0
#include "gbd/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace gbd {

namespace {

void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(fn) + ": argument must be positive");
  }
}

}  // namespace

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  return std::lgamma(x);
}

// Recurrence-shift to x >= 10, then the Bernoulli asymptotic series.
double digamma(double x) {
  require_positive(x, "digamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // ln x - 1/(2x) - sum_k B_{2k} / (2k x^{2k})
  double series = inv2 * (1.0 / 12.0 -
                  inv2 * (1.0 / 120.0 -
                  inv2 * (1.0 / 252.0 -
                  inv2 * (1.0 / 240.0 -
                  inv2 * (1.0 / 132.0 -
                  inv2 * (691.0 / 32760.0))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // 1/x + 1/(2x^2) + sum_k B_{2k} / x^{2k+1}
  double series = 1.0 / 6.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (1.0 / 42.0 -
                  inv2 * (1.0 / 30.0 -
                  inv2 * (5.0 / 66.0 -
                  inv2 * (691.0 / 2730.0)))));
  return acc + inv * (1.0 + inv * (0.5 + inv * series));
}

double log_beta(double a, double b) {
  require_positive(a, "log_beta");
  require_positive(b, "log_beta");
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double clamp_unit(double x) {
  constexpr double kEps = 1e-6;
  if (x < kEps) return kEps;
  if (x > 1.0 - kEps) return 1.0 - kEps;
  return x;
}

double logit_clamped(double x) {
  const double c = clamp_unit(x);
  return std::log(c) - std::log1p(-c);
}

}  // namespace gbd
