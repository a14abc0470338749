// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gbd/autodiff.hpp"
#include "gbd/losses.hpp"
#include "gbd/rng.hpp"
#include "gbd/schedule.hpp"
#include "gbd/state.hpp"

namespace gbd {

struct DenoiserConfig {
  int layers = 4;
  int hidden = 64;
  int heads = 4;
  int time_dim = 32;

  void validate() const;
  int head_dim() const { return hidden / heads; }
};

// Flat collection of named tensors. Master copies are float so that
// checkpoints are lossless; all math promotes to double.
struct DenoiserParameters {
  DenoiserConfig config;
  int feature_dim = 0;
  std::map<std::string, Eigen::MatrixXf> tensors;

  // Uniform fan-in init; output-head biases start at the logit of the raw
  // dataset means so the untrained predictor sits near the data marginal.
  static DenoiserParameters init(const DenoiserConfig& config, int feature_dim,
                                 double adj_mean_raw, const Eigen::VectorXd& feat_mean_raw,
                                 RngStream& rng);
};

using DenseParams = std::map<std::string, Eigen::MatrixXd>;

DenseParams promote(const DenoiserParameters& params);

// Graph-transformer predictor. The node stream is updated by masked
// multi-head self-attention whose per-head logits are conditioned on the
// edge stream, additively and multiplicatively; the edge stream is updated
// from the attention maps; a time embedding feeds both streams each layer.
// Output heads are logistic, the edge output is symmetrized by averaging
// with its transpose, and masked rows/columns are zeroed.
//
// Returns raw (pre scale-shift) estimates in (0,1): adjacency N x N and
// features N x feature_dim.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> predict(
    const DenoiserConfig& config, int feature_dim, const DenseParams& params,
    const Eigen::MatrixXd& std_adj, const Eigen::MatrixXd& std_feat, int t, int T,
    const std::vector<bool>& node_mask = {});

// One training example: standardized inputs plus diffusion-domain targets.
struct TrainExample {
  Eigen::MatrixXd std_adj;
  Eigen::MatrixXd std_feat;
  Eigen::MatrixXd adj_g0;
  Eigen::MatrixXd feat_g0;
  ConcentrationField eta;
  int t = 2;
  std::vector<bool> mask;
};

struct LossParts {
  double total = 0.0;
  double adjacency = 0.0;
  double feature = 0.0;
};

double example_loss(const DenoiserConfig& config, int feature_dim, const DenseParams& params,
                    const TrainExample& ex, const NoiseSchedule& schedule,
                    const LossConfig& loss_cfg, double w_A, double b_A, double w_X, double b_X);

// Exact reverse-mode gradient of example_loss with respect to every tensor.
// Throws NumericError when any gradient is non-finite.
DenseParams example_gradients(const DenoiserConfig& config, int feature_dim,
                              const DenseParams& params, const TrainExample& ex,
                              const NoiseSchedule& schedule, const LossConfig& loss_cfg,
                              double w_A, double b_A, double w_X, double b_X,
                              LossParts* parts_out = nullptr);

// Tape-level forward; exposed so the loss head and tests can build on it.
struct ForwardOutputs {
  int adj_raw = -1;   // tape node ids
  int feat_raw = -1;
  std::map<std::string, int> param_ids;
};
ForwardOutputs build_forward(Tape& tape, const DenoiserConfig& config, int feature_dim,
                             const DenseParams& params, const Eigen::MatrixXd& std_adj,
                             const Eigen::MatrixXd& std_feat, int t, int T,
                             const std::vector<bool>& node_mask);

}  // namespace gbd
