// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

namespace gbd {

// Sigmoid noise schedule: alpha_t = sigmoid(c0 + (c1 - c0) * t / T),
// t = 0..T, strictly decreasing from just below 1 toward 0.
struct NoiseSchedule {
  double c0 = 10.0;
  double c1 = -13.0;
  int T = 1000;
  std::vector<double> alphas;  // length T+1

  static NoiseSchedule make(double c0 = 10.0, double c1 = -13.0, int T = 1000);

  // alpha_t for t in [0, T]; throws std::out_of_range otherwise.
  double alpha(int t) const;
};

}  // namespace gbd
