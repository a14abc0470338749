// SPDX-License-Identifier: Apache-2.0
#include "gbd/beta_kl.hpp"

#include <stdexcept>

#include "gbd/special_functions.hpp"

namespace gbd {

namespace {

void require_shapes(double a, double b, const char* fn) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error(std::string(fn) + ": beta shape parameters must be positive");
  }
}

}  // namespace

double kl_beta(double a1, double b1, double a2, double b2) {
  require_shapes(a1, b1, "kl_beta");
  require_shapes(a2, b2, "kl_beta");
  if (a1 == a2 && b1 == b2) return 0.0;
  const double psi_sum = digamma(a1 + b1);
  return log_beta(a2, b2) - log_beta(a1, b1) +
         (a1 - a2) * (digamma(a1) - psi_sum) +
         (b1 - b2) * (digamma(b1) - psi_sum);
}

double bregman_log_beta(double a, double b, double a_star, double b_star) {
  require_shapes(a, b, "bregman_log_beta");
  require_shapes(a_star, b_star, "bregman_log_beta");
  const double psi_sum = digamma(a_star + b_star);
  const double dphi_da = digamma(a_star) - psi_sum;
  const double dphi_db = digamma(b_star) - psi_sum;
  return log_beta(a, b) - log_beta(a_star, b_star) -
         dphi_da * (a - a_star) - dphi_db * (b - b_star);
}

}  // namespace gbd
