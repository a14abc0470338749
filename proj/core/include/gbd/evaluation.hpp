// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gbd/dataset.hpp"
#include "gbd/graph.hpp"

namespace gbd {

struct EvalConfig {
  double sigma = 1.0;
  int clustering_bins = 100;
  int spectral_bins = 200;
  std::optional<DatasetKind> dataset_kind;  // enables validity when supported
};

struct EvalReport {
  std::map<std::string, double> mmd;  // degree, clustering, orbit4, spectral
  std::optional<double> validity;
  std::string validity_method;        // e.g. "modularity-approximation" for sbm
  double uniqueness = 0.0;
  double novelty = 0.0;
  std::optional<double> vun;          // joint valid & unique & novel fraction
  int generated_count = 0;
  int reference_count = 0;
  int training_count = 0;
  double sigma = 1.0;
  int clustering_bins = 100;
  int spectral_bins = 200;

  std::string to_json() const;       // stable key order
  std::string to_table() const;      // fixed-width summary
};

// All four MMDs between generated and reference, plus uniqueness/novelty
// against the training set and validity when the dataset kind supports it.
EvalReport evaluate(const std::vector<Graph>& generated, const std::vector<Graph>& reference,
                    const std::vector<Graph>& training, const EvalConfig& config);

}  // namespace gbd
