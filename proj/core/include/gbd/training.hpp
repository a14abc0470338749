// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "gbd/denoiser.hpp"
#include "gbd/graph.hpp"
#include "gbd/modulation.hpp"
#include "gbd/preconditioning.hpp"
#include "gbd/rng.hpp"
#include "gbd/schedule.hpp"

namespace gbd {

struct TrainConfig {
  int steps = 3000;
  int batch_size = 16;
  double learning_rate = 0.002;
  double ema_decay = 0.999;
  int checkpoint_interval = 500;
  Domain domain = Domain::kLogit;
  bool precondition = true;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  double divergence_threshold = 1e6;

  void validate() const;
};

// Mutable optimization state. All tensors are float so that checkpointed
// state restores bit-exactly.
struct TrainState {
  DenoiserParameters params;
  std::map<std::string, Eigen::MatrixXf> adam_m;
  std::map<std::string, Eigen::MatrixXf> adam_v;
  std::map<std::string, Eigen::MatrixXf> ema;
  long step = 0;
  std::uint64_t rng_key = 0;
  std::uint64_t rng_counter = 0;
};

struct LossLogEntry {
  long step = 0;
  double adjacency_loss = 0.0;
  double feature_loss = 0.0;
  double total = 0.0;
};

// Dataset-level quantities shared by training and sampling.
struct DataSummary {
  double edge_density = 0.5;              // raw edge probability
  Eigen::VectorXd feat_mean_raw;          // per-channel raw means
  ChannelSource adj_source;               // transformed-domain marginals
  std::vector<ChannelSource> feat_sources;
  std::vector<int> node_counts;           // one per training graph
};

DataSummary summarize_dataset(const std::vector<Graph>& graphs, const TransformParams& tp);

// Sorts graphs by their canonical serialization, so training is invariant to
// the on-disk order of the dataset.
std::vector<Graph> canonical_order(std::vector<Graph> graphs);

using StepCallback = std::function<void(const LossLogEntry&, const TrainState&)>;

struct TrainResult {
  TrainState state;
  std::vector<LossLogEntry> log;
};

// Runs the training loop: per step and per batch element, sample t uniform
// in {2..T}, draw G_t from the forward marginal (via the gamma trick in the
// logit domain), standardize, predict, map the prediction back through the
// data transform, and take one Adam step on the batch-mean gradient.
// Deterministic given the seed carried in `state`.
TrainResult train(const std::vector<Graph>& dataset, const NoiseSchedule& schedule,
                  const ModulationStrategy& modulation, const LossConfig& loss_cfg,
                  const DenoiserConfig& denoiser_cfg, const TrainConfig& train_cfg,
                  const TransformParams& transform_params, TrainState state,
                  const StepCallback& on_step = {});

// Fresh state initialized from the dataset statistics.
TrainState init_train_state(const std::vector<Graph>& dataset, const DenoiserConfig& denoiser_cfg,
                            const TransformParams& transform_params, std::uint64_t seed);

}  // namespace gbd
