// SPDX-License-Identifier: Apache-2.0
#include "gbd/schedule.hpp"

#include <stdexcept>

#include "gbd/errors.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

NoiseSchedule NoiseSchedule::make(double c0, double c1, int T) {
  if (T < 1) throw ConfigError("schedule: T must be >= 1");
  if (!(c1 < c0)) throw ConfigError("schedule: requires c1 < c0 for a decreasing alpha sequence");
  NoiseSchedule s;
  s.c0 = c0;
  s.c1 = c1;
  s.T = T;
  s.alphas.resize(static_cast<std::size_t>(T) + 1);
  for (int t = 0; t <= T; ++t) {
    s.alphas[static_cast<std::size_t>(t)] =
        sigmoid(c0 + (c1 - c0) * static_cast<double>(t) / static_cast<double>(T));
  }
  return s;
}

double NoiseSchedule::alpha(int t) const {
  if (t < 0 || t > T) throw std::out_of_range("schedule: t out of [0, T]");
  return alphas[static_cast<std::size_t>(t)];
}

}  // namespace gbd
