// SPDX-License-Identifier: Apache-2.0
#include "gbd/mmd.hpp"

#include <cmath>

#include "gbd/errors.hpp"

namespace gbd {

double w1_histogram(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double bin_width) {
  const int len = static_cast<int>(std::max(a.size(), b.size()));
  double cum_a = 0.0;
  double cum_b = 0.0;
  double dist = 0.0;
  for (int i = 0; i < len; ++i) {
    cum_a += i < a.size() ? a(i) : 0.0;
    cum_b += i < b.size() ? b(i) : 0.0;
    dist += std::abs(cum_a - cum_b);
  }
  return dist * bin_width;
}

double gaussian_emd_kernel(const GraphStatistic& x, const GraphStatistic& y, double sigma) {
  if (x.kind != y.kind) throw ConfigError("kernel: statistic kinds differ");
  double dist;
  if (x.is_histogram) {
    if (x.bin_width != y.bin_width) throw ConfigError("kernel: bin widths differ");
    dist = w1_histogram(x.values, y.values, x.bin_width);
  } else {
    const int len = static_cast<int>(std::max(x.values.size(), y.values.size()));
    double sq = 0.0;
    for (int i = 0; i < len; ++i) {
      const double xa = i < x.values.size() ? x.values(i) : 0.0;
      const double yb = i < y.values.size() ? y.values(i) : 0.0;
      sq += (xa - yb) * (xa - yb);
    }
    dist = std::sqrt(sq);
  }
  return std::exp(-dist * dist / (2.0 * sigma * sigma));
}

double mmd(const std::vector<GraphStatistic>& a, const std::vector<GraphStatistic>& b,
           double sigma) {
  if (a.empty() || b.empty()) throw ConfigError("mmd: both sample lists must be nonempty");
  for (const auto& s : a) {
    if (s.kind != a.front().kind) throw ConfigError("mmd: mixed statistic kinds");
  }
  for (const auto& s : b) {
    if (s.kind != a.front().kind) throw ConfigError("mmd: mixed statistic kinds");
  }
  const auto m = static_cast<double>(a.size());
  const auto n = static_cast<double>(b.size());
  double kaa = 0.0;
  double kbb = 0.0;
  double kab = 0.0;
  for (const auto& x : a) {
    for (const auto& y : a) kaa += gaussian_emd_kernel(x, y, sigma);
  }
  for (const auto& x : b) {
    for (const auto& y : b) kbb += gaussian_emd_kernel(x, y, sigma);
  }
  for (const auto& x : a) {
    for (const auto& y : b) kab += gaussian_emd_kernel(x, y, sigma);
  }
  const double value = kaa / (m * m) + kbb / (n * n) - 2.0 * kab / (m * n);
  return std::max(value, 0.0);
}

}  // namespace gbd
