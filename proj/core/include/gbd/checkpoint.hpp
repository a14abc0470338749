// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "gbd/graph.hpp"
#include "gbd/schedule.hpp"
#include "gbd/training.hpp"

namespace gbd {

// Everything needed to resume training or to sample: model config and
// tensors (raw, Adam moments, EMA), schedule and transform constants, the
// computation domain, and the training RNG position.
struct Checkpoint {
  TrainState state;
  double c0 = 10.0;
  double c1 = -13.0;
  int T = 1000;
  TransformParams transform;
  Domain domain = Domain::kLogit;
  bool precondition = true;
};

// Binary format: versioned magic string, fixed header, then named tensors
// with explicit shapes and little-endian 32-bit floats. Round trips are
// bitwise exact.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace gbd
