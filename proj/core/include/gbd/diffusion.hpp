// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <utility>

#include "gbd/graph.hpp"
#include "gbd/rng.hpp"
#include "gbd/schedule.hpp"
#include "gbd/state.hpp"

namespace gbd {

// Scalar update kernels. thicken applies one reverse move in the original
// domain; thicken_logit is the identical move expressed in log-odds with
// log-sum-exp stabilization: sigmoid(thicken_logit(logit g, logit p)) equals
// thicken(g, p).
double thicken(double g, double p);
double thicken_logit(double logit_g, double logit_p);

// Draw g_t | g_0 from the forward marginal Beta(eta*alpha_t*g0,
// eta*(1 - alpha_t*g0)) per entry. The strict upper triangle of the
// adjacency is sampled and mirrored; the diagonal is sampled in place.
DiffusionState forward_marginal_sample(const DiffusionState& g0, int t,
                                       const NoiseSchedule& schedule,
                                       const ConcentrationField& eta, RngStream& rng);

// One forward thinning move: g_t = g_{t-1} * Q with
// Q ~ Beta(eta*alpha_t*g0, eta*(alpha_{t-1}-alpha_t)*g0).
DiffusionState forward_step(const DiffusionState& g_prev, const DiffusionState& g0, int t,
                            const NoiseSchedule& schedule, const ConcentrationField& eta,
                            RngStream& rng);

// One reverse thickening move in the original domain:
// g_{t-1} = g_t + P * (1 - g_t),
// P ~ Beta(eta*(alpha_{t-1}-alpha_t)*g0_hat, eta*(1-alpha_{t-1}*g0_hat)).
// g0_hat values are in the diffusion domain (already scale-shifted).
DiffusionState reverse_step(const DiffusionState& g_t, const Eigen::MatrixXd& a0_hat,
                            const Eigen::MatrixXd& x0_hat, int t,
                            const NoiseSchedule& schedule, const ConcentrationField& eta,
                            RngStream& rng);

// Same move with the state kept as logits; P's logit is drawn as
// ln U - ln V from the two gamma variates, so no value ever leaves the
// representable range.
DiffusionState reverse_step_logit(const DiffusionState& logit_g_t, const Eigen::MatrixXd& a0_hat,
                                  const Eigen::MatrixXd& x0_hat, int t,
                                  const NoiseSchedule& schedule, const ConcentrationField& eta,
                                  RngStream& rng);

// Terminal-state prior: per entry Beta(eta*alpha_T*m, eta*(1-alpha_T*m))
// with m the dataset-level mean of transformed values for the entry's class.
DiffusionState sample_prior(int n_nodes, const Eigen::VectorXd& prior_mean_feat,
                            double prior_mean_adj, const NoiseSchedule& schedule,
                            const ConcentrationField& eta, Domain domain, RngStream& rng);

// Predictor contract: given the current state and timestep, return raw
// (pre scale-shift) clean-graph estimates, adjacency N x N and features
// N x D, every entry strictly inside (0,1).
using Predictor =
    std::function<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>(const DiffusionState&, int)>;

struct AncestralConfig {
  Domain domain = Domain::kLogit;
  double threshold = 0.5;
  double prior_mean_adj = 0.5;
  Eigen::VectorXd prior_mean_feat;
  int feature_dim = 0;
  // When positive, record the state every `snapshot_stride` steps.
  int snapshot_stride = 0;
};

struct TrajectorySnapshot {
  int t = 0;
  Eigen::MatrixXd adjacency_values;  // original domain
};

// Full reverse loop t = T..1 followed by quantization.
Graph ancestral_sample(const Predictor& predictor, int n_nodes, const NoiseSchedule& schedule,
                       const ConcentrationField& eta, const TransformParams& transform_params,
                       const AncestralConfig& config, RngStream& rng,
                       std::vector<TrajectorySnapshot>* trajectory = nullptr);

}  // namespace gbd
