// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace gbd {

// KL( Beta(a1,b1) || Beta(a2,b2) )
//   = ln B(a2,b2)/B(a1,b1) + (a1-a2)[psi(a1)-psi(a1+b1)]
//     + (b1-b2)[psi(b1)-psi(a1+b1)]
// Exactly zero when (a1,b1) == (a2,b2).
double kl_beta(double a1, double b1, double a2, double b2);

// Bregman divergence d_phi(x, y) generated by phi(a,b) = ln B(a,b):
//   d_phi = phi(x) - phi(y) - <grad phi(y), x - y>.
// Satisfies KL(Beta(y) || Beta(x)) = d_phi(x, y).
double bregman_log_beta(double a, double b, double a_star, double b_star);

}  // namespace gbd
