// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "gbd/graph_stats.hpp"

namespace gbd {

// 1-Wasserstein distance between two 1D histograms on a shared grid:
// L1 distance of cumulative sums scaled by the bin width. Histograms of
// different lengths are zero-padded on the right.
double w1_histogram(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double bin_width);

// Gaussian kernel over the statistic-appropriate ground distance: W1 for
// histograms, Euclidean for vector statistics.
double gaussian_emd_kernel(const GraphStatistic& x, const GraphStatistic& y, double sigma);

// Biased V-statistic estimate of squared MMD, floored at zero. Both lists
// must be nonempty and carry the same statistic kind.
double mmd(const std::vector<GraphStatistic>& a, const std::vector<GraphStatistic>& b,
           double sigma);

}  // namespace gbd
