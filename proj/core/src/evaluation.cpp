// SPDX-License-Identifier: Apache-2.0
#include "gbd/evaluation.hpp"

#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "gbd/errors.hpp"
#include "gbd/graph_stats.hpp"
#include "gbd/isomorphism.hpp"
#include "gbd/mmd.hpp"
#include "gbd/validity.hpp"

namespace gbd {

EvalReport evaluate(const std::vector<Graph>& generated, const std::vector<Graph>& reference,
                    const std::vector<Graph>& training, const EvalConfig& config) {
  if (generated.empty() || reference.empty()) {
    throw ConfigError("evaluate: generated and reference sets must be nonempty");
  }
  EvalReport report;
  report.generated_count = static_cast<int>(generated.size());
  report.reference_count = static_cast<int>(reference.size());
  report.training_count = static_cast<int>(training.size());
  report.sigma = config.sigma;
  report.clustering_bins = config.clustering_bins;
  report.spectral_bins = config.spectral_bins;

  for (StatisticKind kind : {StatisticKind::kDegree, StatisticKind::kClustering,
                             StatisticKind::kOrbit4, StatisticKind::kSpectral}) {
    std::vector<GraphStatistic> gen_stats;
    std::vector<GraphStatistic> ref_stats;
    gen_stats.reserve(generated.size());
    ref_stats.reserve(reference.size());
    for (const Graph& g : generated) {
      gen_stats.push_back(graph_statistic(g, kind, config.clustering_bins, config.spectral_bins));
    }
    for (const Graph& g : reference) {
      ref_stats.push_back(graph_statistic(g, kind, config.clustering_bins, config.spectral_bins));
    }
    report.mmd[to_string(kind)] = mmd(gen_stats, ref_stats, config.sigma);
  }

  const UniqueNovelFlags flags = uniqueness_novelty_flags(generated, training);
  long unique_count = 0;
  long novel_count = 0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    unique_count += flags.unique[i] ? 1 : 0;
    novel_count += flags.novel[i] ? 1 : 0;
  }
  report.uniqueness = static_cast<double>(unique_count) / generated.size();
  report.novelty = static_cast<double>(novel_count) / generated.size();

  if (config.dataset_kind && supports_validity(*config.dataset_kind)) {
    long valid_count = 0;
    long vun_count = 0;
    for (std::size_t i = 0; i < generated.size(); ++i) {
      const bool valid = validity(generated[i], *config.dataset_kind);
      valid_count += valid ? 1 : 0;
      vun_count += (valid && flags.unique[i] && flags.novel[i]) ? 1 : 0;
    }
    report.validity = static_cast<double>(valid_count) / generated.size();
    report.vun = static_cast<double>(vun_count) / generated.size();
    report.validity_method =
        *config.dataset_kind == DatasetKind::kSbm ? "modularity-approximation" : "exact";
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json m;
  for (const auto& [key, value] : mmd) m[key] = value;
  j["mmd"] = std::move(m);
  nlohmann::ordered_json v;
  if (validity) {
    v["validity"] = *validity;
    v["validity_method"] = validity_method;
  } else {
    v["validity"] = nullptr;
  }
  v["uniqueness"] = uniqueness;
  v["novelty"] = novelty;
  if (vun) v["vun"] = *vun;
  j["vun"] = std::move(v);
  nlohmann::ordered_json c;
  c["generated_count"] = generated_count;
  c["reference_count"] = reference_count;
  c["training_count"] = training_count;
  c["sigma"] = sigma;
  c["clustering_bins"] = clustering_bins;
  c["spectral_bins"] = spectral_bins;
  j["config"] = std::move(c);
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(14) << "metric" << std::right << std::setw(12) << "value"
      << "\n";
  out << std::string(26, '-') << "\n";
  out << std::fixed << std::setprecision(6);
  for (const auto& [key, value] : mmd) {
    out << std::left << std::setw(14) << ("mmd." + key) << std::right << std::setw(12) << value
        << "\n";
  }
  if (validity) {
    out << std::left << std::setw(14) << "validity" << std::right << std::setw(12) << *validity
        << "  [" << validity_method << "]\n";
  }
  out << std::left << std::setw(14) << "uniqueness" << std::right << std::setw(12) << uniqueness
      << "\n";
  out << std::left << std::setw(14) << "novelty" << std::right << std::setw(12) << novelty << "\n";
  if (vun) {
    out << std::left << std::setw(14) << "vun" << std::right << std::setw(12) << *vun << "\n";
  }
  return out.str();
}

}  // namespace gbd
