// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "gbd/schedule.hpp"
#include "gbd/state.hpp"

namespace gbd {

struct Moments {
  double mean = 0.0;
  double var = 1.0;
};

// Original-domain moments of g_t when g_0 is two-valued:
// P(g_0 = a_max) = p, P(g_0 = a_min) = 1 - p.
Moments binary_moments(double p, double a_min, double a_max, double alpha_t, double eta);

// Original-domain moments when g_0 ~ Uniform[x_min, x_max].
Moments uniform_moments(double x_min, double x_max, double alpha_t, double eta);

// Logit-domain moments for the two-valued source.
Moments logit_moments_binary(double p, double a_min, double a_max, double alpha_t, double eta);

// Logit-domain moments for the uniform source. The two Var[psi(.)] terms are
// evaluated by a K-interval trapezoid rule with a max(., 0) guard.
Moments logit_moments_uniform(double x_min, double x_max, double alpha_t, double eta, int K = 1000);

// Describes the marginal of one entry class after the data transformation.
struct ChannelSource {
  bool binary = true;
  double p = 0.5;     // used when binary
  double lo = 0.0;    // a_min or x_min
  double hi = 1.0;    // a_max or x_max
};

// Per-timestep standardization statistics for adjacency entries and each
// feature channel, in the selected domain. Immutable after construction.
struct PrecondStats {
  Domain domain = Domain::kOriginal;
  std::vector<Moments> adj;                 // index t-1 for t in [1, T]
  std::vector<std::vector<Moments>> feat;  // [channel][t-1]
  int trapezoid_k = 1000;

  static PrecondStats build(Domain domain, const NoiseSchedule& schedule,
                            const ChannelSource& adj_source,
                            const std::vector<ChannelSource>& feat_sources, double eta,
                            int trapezoid_k = 1000);

  // Pass-through statistics (mean 0, var 1) used when preconditioning is off.
  static PrecondStats identity(Domain domain, int T, int feature_channels);

  const Moments& adjacency_at(int t) const;
  const Moments& feature_at(int channel, int t) const;
};

// (value - mean) / sqrt(var) per entry class and timestep; masked entries
// pass through as zero. The stats domain must match the state domain.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> standardize(const DiffusionState& state,
                                                        const PrecondStats& stats);

}  // namespace gbd
