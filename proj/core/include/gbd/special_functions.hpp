// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace gbd {

// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

// Digamma psi(x) = d/dx ln Gamma(x), x > 0.
// Relative error <= 1e-10 on [1e-6, 1e6].
double digamma(double x);

// Trigamma psi'(x), x > 0. Same accuracy contract as digamma.
double trigamma(double x);

// ln B(a, b) = ln Gamma(a) + ln Gamma(b) - ln Gamma(a+b), a, b > 0.
double log_beta(double a, double b);

// Numerically stable logistic function.
double sigmoid(double z);

// logit with the state clamp: the argument is clamped into
// [1e-6, 1 - 1e-6] before taking log-odds.
double logit_clamped(double x);

// Clamp into the interior band [1e-6, 1 - 1e-6] used by all state-to-logit
// conversions.
double clamp_unit(double x);

}  // namespace gbd
