// SPDX-License-Identifier: Apache-2.0
#include "gbd/training.hpp"

#include <algorithm>
#include <cmath>

#include "gbd/errors.hpp"
#include "gbd/graph_io.hpp"
#include "gbd/samplers.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

void TrainConfig::validate() const {
  if (steps < 0 || batch_size < 1) throw ConfigError("train: steps >= 0 and batch_size >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train: learning_rate must be > 0");
  if (!(ema_decay >= 0.0 && ema_decay < 1.0)) throw ConfigError("train: ema_decay in [0,1)");
  if (checkpoint_interval < 1) throw ConfigError("train: checkpoint_interval >= 1");
}

std::vector<Graph> canonical_order(std::vector<Graph> graphs) {
  std::vector<std::pair<std::string, std::size_t>> keys;
  keys.reserve(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    keys.emplace_back(graph_to_json_line(graphs[i]), i);
  }
  std::sort(keys.begin(), keys.end());
  std::vector<Graph> out;
  out.reserve(graphs.size());
  for (const auto& [key, idx] : keys) out.push_back(std::move(graphs[idx]));
  return out;
}

DataSummary summarize_dataset(const std::vector<Graph>& graphs, const TransformParams& tp) {
  if (graphs.empty()) throw ConfigError("dataset summary: empty dataset");
  tp.validate();
  DataSummary s;
  double edge_sum = 0.0;
  double pair_sum = 0.0;
  const int d = static_cast<int>(graphs.front().features.cols());
  Eigen::VectorXd feat_sum = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd feat_min = Eigen::VectorXd::Constant(d, 1.0);
  Eigen::VectorXd feat_max = Eigen::VectorXd::Zero(d);
  std::vector<bool> feat_binary(static_cast<std::size_t>(d), true);
  long rows = 0;
  for (const Graph& g : graphs) {
    if (g.features.cols() != d) throw ConfigError("dataset summary: inconsistent feature width");
    edge_sum += 2.0 * g.edge_count();
    pair_sum += static_cast<double>(g.n) * (g.n - 1);
    s.node_counts.push_back(g.n);
    rows += g.n;
    for (int i = 0; i < g.n; ++i) {
      for (int k = 0; k < d; ++k) {
        const double x = g.features(i, k);
        feat_sum(k) += x;
        feat_min(k) = std::min(feat_min(k), x);
        feat_max(k) = std::max(feat_max(k), x);
        if (x != 0.0 && x != 1.0) feat_binary[static_cast<std::size_t>(k)] = false;
      }
    }
  }
  s.edge_density = pair_sum > 0.0 ? edge_sum / pair_sum : 0.0;
  s.feat_mean_raw = rows > 0 ? (feat_sum / static_cast<double>(rows)).eval() : feat_sum;

  s.adj_source.binary = true;
  s.adj_source.p = s.edge_density;
  s.adj_source.lo = tp.b_A;
  s.adj_source.hi = tp.w_A + tp.b_A;

  s.feat_sources.resize(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    ChannelSource& src = s.feat_sources[static_cast<std::size_t>(k)];
    const double lo = tp.w_X * feat_min(k) + tp.b_X;
    const double hi = tp.w_X * feat_max(k) + tp.b_X;
    if (feat_binary[static_cast<std::size_t>(k)]) {
      src.binary = true;
      src.p = s.feat_mean_raw(k);
      src.lo = tp.b_X;
      src.hi = tp.w_X + tp.b_X;
    } else if (hi - lo < 1e-9) {  // constant channel
      src.binary = true;
      src.p = 1.0;
      src.lo = lo;
      src.hi = hi;
    } else {
      src.binary = false;
      src.lo = lo;
      src.hi = hi;
    }
  }
  return s;
}

TrainState init_train_state(const std::vector<Graph>& dataset, const DenoiserConfig& denoiser_cfg,
                            const TransformParams& transform_params, std::uint64_t seed) {
  if (dataset.empty()) throw ConfigError("train: dataset must be nonempty");
  const DataSummary summary = summarize_dataset(dataset, transform_params);
  const int d = static_cast<int>(dataset.front().features.cols());
  if (d < 1) throw ConfigError("train: graphs carry no node features; apply a feature scheme first");
  RngStream rng(seed);
  RngStream init_stream = rng.derive(0x1A17);
  TrainState state;
  state.params = DenoiserParameters::init(denoiser_cfg, d, summary.edge_density,
                                          summary.feat_mean_raw, init_stream);
  for (const auto& [name, tensor] : state.params.tensors) {
    state.adam_m[name] = Eigen::MatrixXf::Zero(tensor.rows(), tensor.cols());
    state.adam_v[name] = Eigen::MatrixXf::Zero(tensor.rows(), tensor.cols());
    state.ema[name] = tensor;
  }
  RngStream train_stream = rng.derive(0x7121);
  state.rng_key = train_stream.key();
  state.rng_counter = train_stream.counter();
  return state;
}

namespace {

// Logit-domain forward marginal via ln U - ln V on every entry; symmetric
// over the adjacency.
void draw_logit_marginal(const Eigen::MatrixXd& adj_g0, const Eigen::MatrixXd& feat_g0,
                         const ConcentrationField& eta, double alpha_t, RngStream& rng,
                         Eigen::MatrixXd& adj_out, Eigen::MatrixXd& feat_out) {
  const int n = static_cast<int>(adj_g0.rows());
  adj_out.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double e = eta.eta_edges(i, j);
      const double v0 = adj_g0(i, j);
      const double z = sample_logit_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
      adj_out(i, j) = z;
      adj_out(j, i) = z;
    }
  }
  feat_out.resize(feat_g0.rows(), feat_g0.cols());
  for (int i = 0; i < feat_g0.rows(); ++i) {
    for (int k = 0; k < feat_g0.cols(); ++k) {
      const double e = eta.eta_nodes(i);
      const double v0 = feat_g0(i, k);
      feat_out(i, k) = sample_logit_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
    }
  }
}

void draw_original_marginal(const Eigen::MatrixXd& adj_g0, const Eigen::MatrixXd& feat_g0,
                            const ConcentrationField& eta, double alpha_t, RngStream& rng,
                            Eigen::MatrixXd& adj_out, Eigen::MatrixXd& feat_out) {
  const int n = static_cast<int>(adj_g0.rows());
  adj_out.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double e = eta.eta_edges(i, j);
      const double v0 = adj_g0(i, j);
      const double x = sample_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
      adj_out(i, j) = x;
      adj_out(j, i) = x;
    }
  }
  feat_out.resize(feat_g0.rows(), feat_g0.cols());
  for (int i = 0; i < feat_g0.rows(); ++i) {
    for (int k = 0; k < feat_g0.cols(); ++k) {
      const double e = eta.eta_nodes(i);
      const double v0 = feat_g0(i, k);
      feat_out(i, k) = sample_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
    }
  }
}

}  // namespace

TrainResult train(const std::vector<Graph>& dataset, const NoiseSchedule& schedule,
                  const ModulationStrategy& modulation, const LossConfig& loss_cfg,
                  const DenoiserConfig& denoiser_cfg, const TrainConfig& train_cfg,
                  const TransformParams& transform_params, TrainState state,
                  const StepCallback& on_step) {
  train_cfg.validate();
  loss_cfg.validate();
  denoiser_cfg.validate();
  if (dataset.empty()) throw ConfigError("train: dataset must be nonempty");

  const std::vector<Graph> graphs = canonical_order(dataset);
  const DataSummary summary = summarize_dataset(graphs, transform_params);
  const int d = static_cast<int>(graphs.front().features.cols());

  // Precomputed per-graph quantities.
  std::vector<Eigen::MatrixXd> adj_g0(graphs.size());
  std::vector<Eigen::MatrixXd> feat_g0(graphs.size());
  std::vector<ConcentrationField> eta_fields(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const DiffusionState s0 = transform(graphs[i], transform_params);
    adj_g0[i] = s0.adjacency_values;
    feat_g0[i] = s0.feature_values;
    eta_fields[i] = assign_eta(graphs[i], modulation);
  }

  const PrecondStats stats =
      train_cfg.precondition
          ? PrecondStats::build(train_cfg.domain, schedule, summary.adj_source,
                                summary.feat_sources, modulation.default_eta)
          : PrecondStats::identity(train_cfg.domain, schedule.T, d);

  RngStream rng;
  rng.restore(state.rng_key, state.rng_counter);

  TrainResult result;
  result.state = std::move(state);
  TrainState& st = result.state;

  const long target_step = st.step + train_cfg.steps;
  while (st.step < target_step) {
    const long step = st.step + 1;
    DenseParams params = promote(st.params);
    DenseParams grad_sum;
    double adj_loss_sum = 0.0;
    double feat_loss_sum = 0.0;
    double total_sum = 0.0;

    for (int b = 0; b < train_cfg.batch_size; ++b) {
      const std::size_t idx = static_cast<std::size_t>(rng.next_u64() % graphs.size());
      const int t = 2 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(schedule.T - 1));
      TrainExample ex;
      ex.t = t;
      ex.adj_g0 = adj_g0[idx];
      ex.feat_g0 = feat_g0[idx];
      ex.eta = eta_fields[idx];

      DiffusionState noisy;
      noisy.t = t;
      noisy.domain = train_cfg.domain;
      const double alpha_t = schedule.alpha(t);
      if (train_cfg.domain == Domain::kLogit) {
        draw_logit_marginal(ex.adj_g0, ex.feat_g0, ex.eta, alpha_t, rng, noisy.adjacency_values,
                            noisy.feature_values);
      } else {
        draw_original_marginal(ex.adj_g0, ex.feat_g0, ex.eta, alpha_t, rng,
                               noisy.adjacency_values, noisy.feature_values);
      }
      auto [std_adj, std_feat] = standardize(noisy, stats);
      ex.std_adj = std::move(std_adj);
      ex.std_feat = std::move(std_feat);

      LossParts parts;
      DenseParams grads = example_gradients(denoiser_cfg, d, params, ex, schedule, loss_cfg,
                                            transform_params.w_A, transform_params.b_A,
                                            transform_params.w_X, transform_params.b_X, &parts);
      total_sum += parts.total;
      adj_loss_sum += parts.adjacency;
      feat_loss_sum += parts.feature;
      if (grad_sum.empty()) {
        grad_sum = std::move(grads);
      } else {
        for (auto& [name, g] : grads) grad_sum[name] += g;
      }
    }

    const double mean_loss = total_sum / train_cfg.batch_size;
    if (!std::isfinite(mean_loss) || mean_loss > train_cfg.divergence_threshold) {
      throw NumericError("train: divergence at step " + std::to_string(step) +
                         " (loss = " + std::to_string(mean_loss) + ")");
    }

    // Adam on the batch-mean gradient, computed in double, stored in float.
    const double bc1 = 1.0 - std::pow(train_cfg.adam_beta1, static_cast<double>(step));
    const double bc2 = 1.0 - std::pow(train_cfg.adam_beta2, static_cast<double>(step));
    for (auto& [name, tensor] : st.params.tensors) {
      const Eigen::MatrixXd g = grad_sum[name] / static_cast<double>(train_cfg.batch_size);
      Eigen::MatrixXd m = st.adam_m[name].cast<double>();
      Eigen::MatrixXd v = st.adam_v[name].cast<double>();
      m = train_cfg.adam_beta1 * m + (1.0 - train_cfg.adam_beta1) * g;
      v = train_cfg.adam_beta2 * v + (1.0 - train_cfg.adam_beta2) * g.cwiseProduct(g);
      const Eigen::MatrixXd m_hat = m / bc1;
      const Eigen::MatrixXd v_hat = v / bc2;
      Eigen::MatrixXd p = tensor.cast<double>();
      const Eigen::MatrixXd denom =
          v_hat.cwiseSqrt() + Eigen::MatrixXd::Constant(p.rows(), p.cols(), train_cfg.adam_eps);
      p -= train_cfg.learning_rate * m_hat.cwiseQuotient(denom);
      st.adam_m[name] = m.cast<float>();
      st.adam_v[name] = v.cast<float>();
      tensor = p.cast<float>();
      Eigen::MatrixXd e = st.ema[name].cast<double>();
      e = train_cfg.ema_decay * e + (1.0 - train_cfg.ema_decay) * p;
      st.ema[name] = e.cast<float>();
    }

    st.step = step;
    st.rng_key = rng.key();
    st.rng_counter = rng.counter();

    LossLogEntry entry;
    entry.step = step;
    entry.total = mean_loss;
    entry.adjacency_loss = adj_loss_sum / train_cfg.batch_size;
    entry.feature_loss = feat_loss_sum / train_cfg.batch_size;
    result.log.push_back(entry);
    if (on_step) on_step(entry, st);
  }
  return result;
}

}  // namespace gbd
