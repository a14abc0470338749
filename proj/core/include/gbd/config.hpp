// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

#include "gbd/dataset.hpp"
#include "gbd/denoiser.hpp"
#include "gbd/evaluation.hpp"
#include "gbd/graph.hpp"
#include "gbd/losses.hpp"
#include "gbd/modulation.hpp"
#include "gbd/node_features.hpp"
#include "gbd/schedule.hpp"
#include "gbd/training.hpp"

namespace gbd {

struct SamplingConfig {
  int count = 20;
  double threshold = 0.5;
  bool use_ema = true;
  bool trajectory = false;
  int snapshot_stride = 100;
};

// Aggregated run configuration, loaded from one JSON file. Every field has a
// default; resolved configs (defaults filled in) are echoed byte-identically
// on rerun.
struct RunConfig {
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  int threads = 1;
  DatasetSpec dataset;
  TransformParams transform;
  double schedule_c0 = 10.0;
  double schedule_c1 = -13.0;
  int schedule_T = 1000;
  ModulationStrategy modulation;
  FeatureScheme feature_scheme = FeatureScheme::kDegreeOnehot;
  LossConfig loss;
  DenoiserConfig denoiser;
  TrainConfig training;
  SamplingConfig sampling;
  EvalConfig eval;

  NoiseSchedule make_schedule() const { return NoiseSchedule::make(schedule_c0, schedule_c1, schedule_T); }
  void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from_json_text(const std::string& text);

// Resolved config with stable key order; reruns produce identical bytes.
std::string run_config_to_json(const RunConfig& config);

// FNV-1a hash of the resolved config text, hex-encoded.
std::string config_hash(const RunConfig& config);

}  // namespace gbd
