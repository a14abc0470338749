// SPDX-License-Identifier: Apache-2.0
#include "gbd/samplers.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gbd/special_functions.hpp"

namespace gbd {

namespace {

void require_shape(double shape, const char* fn) {
  if (!(shape > 0.0) || std::isnan(shape)) {
    throw std::domain_error(std::string(fn) + ": shape must be positive");
  }
}

// Marsaglia & Tsang (2000) for shape >= 1.
double gamma_ge1(double shape, RngStream& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = rng.next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.next_double();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_gamma(double shape, RngStream& rng) {
  require_shape(shape, "sample_gamma");
  if (shape >= 1.0) return gamma_ge1(shape, rng);
  const double g = gamma_ge1(shape + 1.0, rng);
  const double u = rng.next_double();
  return g * std::exp(std::log(u) / shape);
}

double sample_log_gamma(double shape, RngStream& rng) {
  require_shape(shape, "sample_log_gamma");
  if (shape >= 1.0) return std::log(gamma_ge1(shape, rng));
  const double g = gamma_ge1(shape + 1.0, rng);
  const double u = rng.next_double();
  return std::log(g) + std::log(u) / shape;
}

double sample_beta(double a, double b, RngStream& rng) {
  require_shape(a, "sample_beta");
  require_shape(b, "sample_beta");
  const double d = sample_log_gamma(a, rng) - sample_log_gamma(b, rng);
  double x = sigmoid(d);
  // Keep the open-interval contract when sigmoid saturates.
  if (x <= 0.0) x = std::numeric_limits<double>::min();
  const double top = 1.0 - 0x1.0p-53;
  if (x > top) x = top;
  return x;
}

double sample_logit_beta(double a, double b, RngStream& rng) {
  require_shape(a, "sample_logit_beta");
  require_shape(b, "sample_logit_beta");
  return sample_log_gamma(a, rng) - sample_log_gamma(b, rng);
}

}  // namespace gbd
