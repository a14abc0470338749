// SPDX-License-Identifier: Apache-2.0
#include "gbd/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gbd/errors.hpp"

namespace gbd {

using ordered_json = nlohmann::ordered_json;

namespace {

template <typename T>
void read_field(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) {
    try {
      out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
  }
}

Domain domain_from_string(const std::string& s) {
  if (s == "original") return Domain::kOriginal;
  if (s == "logit") return Domain::kLogit;
  throw ConfigError("config: domain must be 'original' or 'logit'");
}

std::string to_string(Domain d) { return d == Domain::kLogit ? "logit" : "original"; }

}  // namespace

void RunConfig::validate() const {
  dataset.validate();
  transform.validate();
  modulation.validate();
  loss.validate();
  denoiser.validate();
  training.validate();
  if (schedule_T < 1 || !(schedule_c1 < schedule_c0)) {
    throw ConfigError("config: schedule requires T >= 1 and c1 < c0");
  }
  if (sampling.count < 1) throw ConfigError("config: sampling.count must be >= 1");
  if (!(sampling.threshold > 0.0 && sampling.threshold < 1.0)) {
    throw ConfigError("config: sampling.threshold must lie in (0,1)");
  }
  if (sampling.snapshot_stride < 1) throw ConfigError("config: snapshot_stride must be >= 1");
  if (!(eval.sigma > 0.0)) throw ConfigError("config: eval.sigma must be > 0");
  if (eval.clustering_bins < 1 || eval.spectral_bins < 1) {
    throw ConfigError("config: eval bins must be >= 1");
  }
  if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

RunConfig run_config_from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig c;
  read_field(j, "seed", c.seed);
  read_field(j, "out_dir", c.out_dir);
  read_field(j, "threads", c.threads);

  if (j.contains("dataset")) {
    const auto& d = j["dataset"];
    std::string kind = to_string(c.dataset.kind);
    read_field(d, "kind", kind);
    c.dataset.kind = dataset_kind_from_string(kind);
    read_field(d, "count", c.dataset.count);
    read_field(d, "p_intra", c.dataset.p_intra);
    read_field(d, "inter_frac", c.dataset.inter_frac);
    read_field(d, "min_side", c.dataset.min_side);
    read_field(d, "max_side", c.dataset.max_side);
    read_field(d, "communities_min", c.dataset.communities_min);
    read_field(d, "communities_max", c.dataset.communities_max);
    read_field(d, "block_min", c.dataset.block_min);
    read_field(d, "block_max", c.dataset.block_max);
    read_field(d, "p_within", c.dataset.p_within);
    read_field(d, "p_between", c.dataset.p_between);
    read_field(d, "planar_nodes", c.dataset.planar_nodes);
  }
  c.dataset.seed = c.seed;

  if (j.contains("transform")) {
    const auto& t = j["transform"];
    read_field(t, "w_A", c.transform.w_A);
    read_field(t, "b_A", c.transform.b_A);
    read_field(t, "w_X", c.transform.w_X);
    read_field(t, "b_X", c.transform.b_X);
  }
  if (j.contains("schedule")) {
    const auto& s = j["schedule"];
    read_field(s, "c0", c.schedule_c0);
    read_field(s, "c1", c.schedule_c1);
    read_field(s, "T", c.schedule_T);
  }
  if (j.contains("modulation")) {
    const auto& m = j["modulation"];
    std::string kind = to_string(c.modulation.kind);
    read_field(m, "kind", kind);
    c.modulation.kind = modulation_kind_from_string(kind);
    read_field(m, "levels", c.modulation.levels);
    read_field(m, "thresholds", c.modulation.thresholds);
    read_field(m, "default_eta", c.modulation.default_eta);
  }
  if (j.contains("features")) {
    std::string scheme = to_string(c.feature_scheme);
    read_field(j["features"], "scheme", scheme);
    c.feature_scheme = feature_scheme_from_string(scheme);
  }
  if (j.contains("loss")) {
    const auto& l = j["loss"];
    read_field(l, "omega", c.loss.omega);
    read_field(l, "gamma_node", c.loss.gamma_node);
  }
  if (j.contains("denoiser")) {
    const auto& d = j["denoiser"];
    read_field(d, "layers", c.denoiser.layers);
    read_field(d, "hidden", c.denoiser.hidden);
    read_field(d, "heads", c.denoiser.heads);
    read_field(d, "time_dim", c.denoiser.time_dim);
  }
  if (j.contains("training")) {
    const auto& t = j["training"];
    read_field(t, "steps", c.training.steps);
    read_field(t, "batch_size", c.training.batch_size);
    read_field(t, "learning_rate", c.training.learning_rate);
    read_field(t, "ema_decay", c.training.ema_decay);
    read_field(t, "checkpoint_interval", c.training.checkpoint_interval);
    std::string domain = to_string(c.training.domain);
    read_field(t, "domain", domain);
    c.training.domain = domain_from_string(domain);
    read_field(t, "precondition", c.training.precondition);
    read_field(t, "divergence_threshold", c.training.divergence_threshold);
  }
  if (j.contains("sampling")) {
    const auto& s = j["sampling"];
    read_field(s, "count", c.sampling.count);
    read_field(s, "threshold", c.sampling.threshold);
    read_field(s, "use_ema", c.sampling.use_ema);
    read_field(s, "trajectory", c.sampling.trajectory);
    read_field(s, "snapshot_stride", c.sampling.snapshot_stride);
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    read_field(e, "sigma", c.eval.sigma);
    read_field(e, "clustering_bins", c.eval.clustering_bins);
    read_field(e, "spectral_bins", c.eval.spectral_bins);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return run_config_from_json_text(buffer.str());
}

std::string run_config_to_json(const RunConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["out_dir"] = c.out_dir;
  j["threads"] = c.threads;
  ordered_json d;
  d["kind"] = to_string(c.dataset.kind);
  d["count"] = c.dataset.count;
  switch (c.dataset.kind) {
    case DatasetKind::kCommunitySmall:
      d["p_intra"] = c.dataset.p_intra;
      d["inter_frac"] = c.dataset.inter_frac;
      break;
    case DatasetKind::kGrid:
      d["min_side"] = c.dataset.min_side;
      d["max_side"] = c.dataset.max_side;
      break;
    case DatasetKind::kSbm:
      d["communities_min"] = c.dataset.communities_min;
      d["communities_max"] = c.dataset.communities_max;
      d["block_min"] = c.dataset.block_min;
      d["block_max"] = c.dataset.block_max;
      d["p_within"] = c.dataset.p_within;
      d["p_between"] = c.dataset.p_between;
      break;
    case DatasetKind::kPlanar:
      d["planar_nodes"] = c.dataset.planar_nodes;
      break;
  }
  j["dataset"] = std::move(d);
  j["transform"] = {{"w_A", c.transform.w_A},
                    {"b_A", c.transform.b_A},
                    {"w_X", c.transform.w_X},
                    {"b_X", c.transform.b_X}};
  j["schedule"] = {{"c0", c.schedule_c0}, {"c1", c.schedule_c1}, {"T", c.schedule_T}};
  j["modulation"] = {{"kind", to_string(c.modulation.kind)},
                     {"levels", c.modulation.levels},
                     {"thresholds", c.modulation.thresholds},
                     {"default_eta", c.modulation.default_eta}};
  j["features"] = {{"scheme", to_string(c.feature_scheme)}};
  j["loss"] = {{"omega", c.loss.omega}, {"gamma_node", c.loss.gamma_node}};
  j["denoiser"] = {{"layers", c.denoiser.layers},
                   {"hidden", c.denoiser.hidden},
                   {"heads", c.denoiser.heads},
                   {"time_dim", c.denoiser.time_dim}};
  j["training"] = {{"steps", c.training.steps},
                   {"batch_size", c.training.batch_size},
                   {"learning_rate", c.training.learning_rate},
                   {"ema_decay", c.training.ema_decay},
                   {"checkpoint_interval", c.training.checkpoint_interval},
                   {"domain", to_string(c.training.domain)},
                   {"precondition", c.training.precondition},
                   {"divergence_threshold", c.training.divergence_threshold}};
  j["sampling"] = {{"count", c.sampling.count},
                   {"threshold", c.sampling.threshold},
                   {"use_ema", c.sampling.use_ema},
                   {"trajectory", c.sampling.trajectory},
                   {"snapshot_stride", c.sampling.snapshot_stride}};
  j["eval"] = {{"sigma", c.eval.sigma},
               {"clustering_bins", c.eval.clustering_bins},
               {"spectral_bins", c.eval.spectral_bins}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  const std::string text = run_config_to_json(config);
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001B3ull;
  }
  std::ostringstream out;
  out << std::hex << h;
  return out.str();
}

}  // namespace gbd
