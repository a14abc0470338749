// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "gbd/rng.hpp"

namespace gbd {

// Gamma(shape, 1) draw. Marsaglia-Tsang squeeze/rejection for shape >= 1;
// for shape < 1 the boosting identity Gamma(a) = Gamma(a+1) * U^{1/a}
// is applied (in linear space here, so the result may underflow to 0 for
// extremely small shapes; use sample_log_gamma where that matters).
double sample_gamma(double shape, RngStream& rng);

// ln of a Gamma(shape, 1) draw. Finite for arbitrarily small positive shapes:
// the U^{1/a} boost is applied as ln(U)/a in log space.
double sample_log_gamma(double shape, RngStream& rng);

// Beta(a, b) draw as U/(U+V) with U ~ Gamma(a,1), V ~ Gamma(b,1). Strictly
// inside (0,1): results are nudged off the boundary by at most one ulp-scale
// amount when the underlying ratio underflows.
double sample_beta(double a, double b, RngStream& rng);

// logit of a Beta(a, b) draw via ln U - ln V. Always finite.
double sample_logit_beta(double a, double b, RngStream& rng);

}  // namespace gbd
