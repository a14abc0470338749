// SPDX-License-Identifier: Apache-2.0
#include "gbd/denoiser.hpp"

#include <cmath>

#include "gbd/errors.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

void DenoiserConfig::validate() const {
  if (layers < 1 || hidden < 1 || heads < 1 || time_dim < 2) {
    throw ConfigError("denoiser: layers, hidden, heads must be >= 1 and time_dim >= 2");
  }
  if (hidden % heads != 0) throw ConfigError("denoiser: hidden must be divisible by heads");
  if (time_dim % 2 != 0) throw ConfigError("denoiser: time_dim must be even");
}

namespace {

Eigen::MatrixXf uniform_init(int rows, int cols, int fan_in, RngStream& rng) {
  const double s = 1.0 / std::sqrt(static_cast<double>(std::max(fan_in, 1)));
  Eigen::MatrixXf m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = static_cast<float>((2.0 * rng.next_double() - 1.0) * s);
    }
  }
  return m;
}

std::string layer_prefix(int l) { return "layer" + std::to_string(l) + "."; }

Eigen::RowVectorXd time_embedding(int t, int T, int dim) {
  // Geometric frequencies over normalized time.
  const double tau = static_cast<double>(t) / static_cast<double>(T);
  const int half = dim / 2;
  Eigen::RowVectorXd e(dim);
  for (int i = 0; i < half; ++i) {
    const double freq =
        std::pow(1000.0, half > 1 ? static_cast<double>(i) / static_cast<double>(half - 1) : 0.0);
    e(2 * i) = std::sin(freq * tau);
    e(2 * i + 1) = std::cos(freq * tau);
  }
  return e;
}

}  // namespace

DenoiserParameters DenoiserParameters::init(const DenoiserConfig& config, int feature_dim,
                                            double adj_mean_raw,
                                            const Eigen::VectorXd& feat_mean_raw,
                                            RngStream& rng) {
  config.validate();
  if (feature_dim < 1) throw ConfigError("denoiser: feature_dim must be >= 1");
  if (feat_mean_raw.size() != feature_dim) {
    throw ConfigError("denoiser: feat_mean_raw must have feature_dim entries");
  }
  const int h = config.hidden;
  const int H = config.heads;
  const int dk = config.head_dim();
  const int td = config.time_dim;

  DenoiserParameters p;
  p.config = config;
  p.feature_dim = feature_dim;
  auto& ts = p.tensors;

  ts["in.node.w"] = uniform_init(feature_dim, h, feature_dim, rng);
  ts["in.node.b"] = Eigen::MatrixXf::Zero(1, h);
  ts["in.edge.w"] = uniform_init(1, H, 1, rng);
  ts["in.edge.b"] = Eigen::MatrixXf::Zero(1, H);
  ts["time.w1"] = uniform_init(td, h, td, rng);
  ts["time.b1"] = Eigen::MatrixXf::Zero(1, h);
  ts["time.w2"] = uniform_init(h, h, h, rng);
  ts["time.b2"] = Eigen::MatrixXf::Zero(1, h);

  for (int l = 0; l < config.layers; ++l) {
    const std::string pre = layer_prefix(l);
    ts[pre + "ln1.g"] = Eigen::MatrixXf::Ones(1, h);
    ts[pre + "ln1.b"] = Eigen::MatrixXf::Zero(1, h);
    for (int k = 0; k < H; ++k) {
      const std::string hp = pre + "h" + std::to_string(k) + ".";
      ts[hp + "wq"] = uniform_init(h, dk, h, rng);
      ts[hp + "wk"] = uniform_init(h, dk, h, rng);
      ts[hp + "wv"] = uniform_init(h, dk, h, rng);
    }
    ts[pre + "film.mul"] = uniform_init(H, H, H, rng);
    ts[pre + "film.mul_b"] = Eigen::MatrixXf::Zero(1, H);
    ts[pre + "film.add"] = uniform_init(H, H, H, rng);
    ts[pre + "film.add_b"] = Eigen::MatrixXf::Zero(1, H);
    ts[pre + "attn.wo"] = uniform_init(h, h, h, rng);
    ts[pre + "attn.bo"] = Eigen::MatrixXf::Zero(1, h);
    ts[pre + "edge.upd"] = uniform_init(H, H, H, rng);
    ts[pre + "edge.upd_b"] = Eigen::MatrixXf::Zero(1, H);
    ts[pre + "time.node"] = uniform_init(h, h, h, rng);
    ts[pre + "time.node_b"] = Eigen::MatrixXf::Zero(1, h);
    ts[pre + "time.edge"] = uniform_init(h, H, h, rng);
    ts[pre + "time.edge_b"] = Eigen::MatrixXf::Zero(1, H);
    ts[pre + "ln2.g"] = Eigen::MatrixXf::Ones(1, h);
    ts[pre + "ln2.b"] = Eigen::MatrixXf::Zero(1, h);
    ts[pre + "mlp.w1"] = uniform_init(h, 2 * h, h, rng);
    ts[pre + "mlp.b1"] = Eigen::MatrixXf::Zero(1, 2 * h);
    ts[pre + "mlp.w2"] = uniform_init(2 * h, h, 2 * h, rng);
    ts[pre + "mlp.b2"] = Eigen::MatrixXf::Zero(1, h);
  }

  ts["out.ln.g"] = Eigen::MatrixXf::Ones(1, h);
  ts["out.ln.b"] = Eigen::MatrixXf::Zero(1, h);
  ts["out.node.w"] = uniform_init(h, feature_dim, h, rng);
  Eigen::MatrixXf node_bias(1, feature_dim);
  for (int d = 0; d < feature_dim; ++d) {
    node_bias(0, d) = static_cast<float>(logit_clamped(feat_mean_raw(d)));
  }
  ts["out.node.b"] = node_bias;
  ts["out.edge.w"] = uniform_init(1, H, H, rng);
  Eigen::MatrixXf edge_bias(1, 1);
  edge_bias(0, 0) = static_cast<float>(logit_clamped(adj_mean_raw));
  ts["out.edge.b"] = edge_bias;
  return p;
}

DenseParams promote(const DenoiserParameters& params) {
  DenseParams out;
  for (const auto& [name, tensor] : params.tensors) {
    out[name] = tensor.cast<double>();
  }
  return out;
}

ForwardOutputs build_forward(Tape& tape, const DenoiserConfig& config, int feature_dim,
                             const DenseParams& params, const Eigen::MatrixXd& std_adj,
                             const Eigen::MatrixXd& std_feat, int t, int T,
                             const std::vector<bool>& node_mask) {
  config.validate();
  const int n = static_cast<int>(std_adj.rows());
  if (std_adj.cols() != n) throw ConfigError("predict: adjacency input must be square");
  if (std_feat.rows() != n || std_feat.cols() != feature_dim) {
    throw ConfigError("predict: feature input shape mismatch");
  }
  if (t < 1 || t > T) throw ConfigError("predict: t outside [1, T]");
  const int H = config.heads;

  ForwardOutputs out;
  auto pid = [&](const std::string& name) {
    auto it = params.find(name);
    if (it == params.end()) throw ConfigError("predict: missing tensor " + name);
    auto found = out.param_ids.find(name);
    if (found != out.param_ids.end()) return found->second;
    const int id = tape.leaf(it->second);
    out.param_ids.emplace(name, id);
    return id;
  };

  const bool masked = !node_mask.empty();
  Eigen::MatrixXd row_mask = Eigen::MatrixXd::Ones(n, 1);
  if (masked) {
    for (int i = 0; i < n; ++i) row_mask(i, 0) = node_mask[static_cast<std::size_t>(i)] ? 1.0 : 0.0;
  }
  const Eigen::MatrixXd node_mask_mat = row_mask.replicate(1, 1) * Eigen::MatrixXd::Ones(1, config.hidden);
  const Eigen::MatrixXd pair_mask_mat = row_mask * row_mask.transpose();

  auto mask_nodes = [&](int x) { return masked ? tape.mul_const(x, node_mask_mat) : x; };
  auto mask_pairs = [&](int x) { return masked ? tape.mul_const(x, pair_mask_mat) : x; };

  // Inputs as leaves (their gradients are computed but unused).
  Eigen::MatrixXd adj_in = std_adj;
  Eigen::MatrixXd feat_in = std_feat;
  if (masked) {
    adj_in = adj_in.cwiseProduct(pair_mask_mat);
    feat_in = feat_in.cwiseProduct(row_mask * Eigen::MatrixXd::Ones(1, feature_dim));
  }
  const int adj_leaf = tape.leaf(adj_in);
  const int feat_leaf = tape.leaf(feat_in);

  // Time embedding through a two-layer perceptron.
  const int sin_leaf = tape.leaf(time_embedding(t, T, config.time_dim));
  int temb = tape.tanh(tape.add(tape.matmul(sin_leaf, pid("time.w1")), pid("time.b1")));
  temb = tape.add(tape.matmul(temb, pid("time.w2")), pid("time.b2"));  // 1 x h

  // Node stream.
  int Hs = tape.rowvec_add(tape.matmul(feat_leaf, pid("in.node.w")), pid("in.node.b"));
  Hs = mask_nodes(Hs);

  // Edge stream: one channel per head, affine in the standardized adjacency.
  std::vector<int> E(static_cast<std::size_t>(H));
  for (int c = 0; c < H; ++c) {
    int ch = tape.scalar_mul(adj_leaf, tape.slice_entry(pid("in.edge.w"), 0, c));
    ch = tape.scalar_add(ch, tape.slice_entry(pid("in.edge.b"), 0, c));
    E[static_cast<std::size_t>(c)] = mask_pairs(ch);
  }

  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(config.head_dim()));

  for (int l = 0; l < config.layers; ++l) {
    const std::string pre = layer_prefix(l);
    // Time conditioning into both streams.
    int tn = tape.add(tape.matmul(temb, pid(pre + "time.node")), pid(pre + "time.node_b"));
    Hs = mask_nodes(tape.rowvec_add(Hs, tn));
    int te = tape.add(tape.matmul(temb, pid(pre + "time.edge")), pid(pre + "time.edge_b"));
    for (int c = 0; c < H; ++c) {
      E[static_cast<std::size_t>(c)] =
          mask_pairs(tape.scalar_add(E[static_cast<std::size_t>(c)], tape.slice_entry(te, 0, c)));
    }

    // Attention block with edge-conditioned logits.
    const int x1 = tape.layernorm_rows(Hs, pid(pre + "ln1.g"), pid(pre + "ln1.b"));
    std::vector<int> head_outputs(static_cast<std::size_t>(H));
    std::vector<int> attn_maps(static_cast<std::size_t>(H));
    for (int k = 0; k < H; ++k) {
      const std::string hp = pre + "h" + std::to_string(k) + ".";
      const int q = tape.matmul(x1, pid(hp + "wq"));
      const int kk = tape.matmul(x1, pid(hp + "wk"));
      const int v = tape.matmul(x1, pid(hp + "wv"));
      int s = tape.scale(tape.matmul(q, tape.transpose(kk)), inv_sqrt_dk);
      int fmul = tape.lincomb_row(E, pid(pre + "film.mul"), k);
      fmul = tape.scalar_add(fmul, tape.slice_entry(pid(pre + "film.mul_b"), 0, k));
      int fadd = tape.lincomb_row(E, pid(pre + "film.add"), k);
      fadd = tape.scalar_add(fadd, tape.slice_entry(pid(pre + "film.add_b"), 0, k));
      s = tape.add(tape.mul(s, tape.shift(fmul, 1.0)), fadd);
      const int p = tape.softmax_rows(s, node_mask);
      attn_maps[static_cast<std::size_t>(k)] = p;
      head_outputs[static_cast<std::size_t>(k)] = tape.matmul(p, v);
    }
    int attn = tape.concat_cols(head_outputs);
    attn = tape.rowvec_add(tape.matmul(attn, pid(pre + "attn.wo")), pid(pre + "attn.bo"));
    Hs = mask_nodes(tape.add(Hs, attn));

    // Edge stream update from the attention maps.
    for (int c = 0; c < H; ++c) {
      int upd = tape.lincomb_row(attn_maps, pid(pre + "edge.upd"), c);
      upd = tape.scalar_add(upd, tape.slice_entry(pid(pre + "edge.upd_b"), 0, c));
      E[static_cast<std::size_t>(c)] =
          mask_pairs(tape.add(E[static_cast<std::size_t>(c)], upd));
    }

    // Position-wise MLP.
    const int x2 = tape.layernorm_rows(Hs, pid(pre + "ln2.g"), pid(pre + "ln2.b"));
    int m = tape.tanh(tape.rowvec_add(tape.matmul(x2, pid(pre + "mlp.w1")), pid(pre + "mlp.b1")));
    m = tape.rowvec_add(tape.matmul(m, pid(pre + "mlp.w2")), pid(pre + "mlp.b2"));
    Hs = mask_nodes(tape.add(Hs, m));
  }

  const int xf = tape.layernorm_rows(Hs, pid("out.ln.g"), pid("out.ln.b"));
  int node_out = tape.sigmoid(
      tape.rowvec_add(tape.matmul(xf, pid("out.node.w")), pid("out.node.b")));
  if (masked) {
    node_out = tape.mul_const(node_out, row_mask * Eigen::MatrixXd::Ones(1, feature_dim));
  }

  int z = tape.lincomb_row(E, pid("out.edge.w"), 0);
  z = tape.scalar_add(z, pid("out.edge.b"));
  const int sig = tape.sigmoid(z);
  int edge_out = tape.scale(tape.add(sig, tape.transpose(sig)), 0.5);
  edge_out = mask_pairs(edge_out);

  out.adj_raw = edge_out;
  out.feat_raw = node_out;
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> predict(
    const DenoiserConfig& config, int feature_dim, const DenseParams& params,
    const Eigen::MatrixXd& std_adj, const Eigen::MatrixXd& std_feat, int t, int T,
    const std::vector<bool>& node_mask) {
  Tape tape;
  const ForwardOutputs fo =
      build_forward(tape, config, feature_dim, params, std_adj, std_feat, t, T, node_mask);
  Eigen::MatrixXd adj = tape.value(fo.adj_raw);
  Eigen::MatrixXd feat = tape.value(fo.feat_raw);
  if (!adj.allFinite() || !feat.allFinite()) {
    throw NumericError("predict: non-finite activation in denoiser output");
  }
  return {std::move(adj), std::move(feat)};
}

namespace {

// Per-entry KL between Beta(c_a*ghat, eta - c_b*ghat) and the same map
// applied to the target, with the target side folded into constants.
int kl_on_tape(Tape& tape, int ghat, const Eigen::MatrixXd& g0, const Eigen::MatrixXd& eta,
               double alpha_shape, double alpha_tail) {
  const Eigen::MatrixXd c_a = alpha_shape * eta;
  const Eigen::MatrixXd c_b = alpha_tail * eta;
  const Eigen::MatrixXd a2 = c_a.cwiseProduct(g0);
  const Eigen::MatrixXd b2 = eta - c_b.cwiseProduct(g0);
  const Eigen::MatrixXd s2 = a2 + b2;
  Eigen::MatrixXd log_beta_ref(g0.rows(), g0.cols());
  for (int i = 0; i < g0.rows(); ++i) {
    for (int j = 0; j < g0.cols(); ++j) {
      log_beta_ref(i, j) = log_beta(a2(i, j), b2(i, j));
    }
  }
  const int a1 = tape.mul_const(ghat, c_a);
  const int b1 = tape.rsub_const(tape.mul_const(ghat, c_b), eta);
  const int s1 = tape.add(a1, b1);
  const int lg = tape.sub(tape.lgamma(s1), tape.add(tape.lgamma(a1), tape.lgamma(b1)));
  const int da = tape.sub_const(a1, a2);
  const int db = tape.sub_const(b1, b2);
  const int ds = tape.sub_const(s1, s2);
  const int core = tape.sub(tape.add(tape.mul(da, tape.digamma(a1)), tape.mul(db, tape.digamma(b1))),
                            tape.mul(ds, tape.digamma(s1)));
  return tape.add_const(tape.add(lg, core), log_beta_ref);
}

struct LossBuild {
  int total = -1;
  int adj_part = -1;
  int feat_part = -1;  // -1 when the graph carries no features
};

LossBuild build_loss(Tape& tape, const ForwardOutputs& fo, const TrainExample& ex,
                     const NoiseSchedule& schedule, const LossConfig& loss_cfg, double w_A,
                     double b_A, double w_X, double b_X) {
  loss_cfg.validate();
  if (ex.t < 2 || ex.t > schedule.T) throw ConfigError("loss: t outside [2, T]");
  const double alpha_t = schedule.alpha(ex.t);
  const double alpha_prev = schedule.alpha(ex.t - 1);
  const double d_alpha = alpha_prev - alpha_t;
  const int n = static_cast<int>(ex.adj_g0.rows());
  const int d = static_cast<int>(ex.feat_g0.cols());

  auto active = [&ex](int i) {
    return ex.mask.empty() || ex.mask[static_cast<std::size_t>(i)];
  };

  // Strict-upper-triangle mean weights for the adjacency part.
  Eigen::MatrixXd adj_w = Eigen::MatrixXd::Zero(n, n);
  long adj_count = 0;
  for (int i = 0; i < n; ++i) {
    if (!active(i)) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!active(j)) continue;
      adj_w(i, j) = 1.0;
      ++adj_count;
    }
  }
  if (adj_count > 0) adj_w /= static_cast<double>(adj_count);

  Eigen::MatrixXd feat_w = Eigen::MatrixXd::Zero(n, d);
  long feat_count = 0;
  for (int i = 0; i < n; ++i) {
    if (!active(i)) continue;
    for (int k = 0; k < d; ++k) {
      feat_w(i, k) = 1.0;
      ++feat_count;
    }
  }
  if (feat_count > 0) feat_w /= static_cast<double>(feat_count);

  const Eigen::MatrixXd eta_feat =
      ex.eta.eta_nodes * Eigen::RowVectorXd::Ones(d);

  const int adj_hat = tape.shift(tape.scale(fo.adj_raw, w_A), b_A);
  const int feat_hat = tape.shift(tape.scale(fo.feat_raw, w_X), b_X);

  auto weighted_mix = [&](int ghat, const Eigen::MatrixXd& g0, const Eigen::MatrixXd& eta,
                          const Eigen::MatrixXd& weights) {
    const int ls = kl_on_tape(tape, ghat, g0, eta, d_alpha, alpha_prev);
    const int lc = kl_on_tape(tape, ghat, g0, eta, alpha_t, alpha_t);
    const int mix = tape.add(tape.scale(ls, 1.0 - loss_cfg.omega), tape.scale(lc, loss_cfg.omega));
    return tape.weighted_sum(mix, weights);
  };

  LossBuild out;
  out.adj_part = weighted_mix(adj_hat, ex.adj_g0, ex.eta.eta_edges, adj_w);
  if (feat_count > 0) {
    out.feat_part = weighted_mix(feat_hat, ex.feat_g0, eta_feat, feat_w);
    out.total = tape.add(out.adj_part, tape.scale(out.feat_part, loss_cfg.gamma_node));
  } else {
    out.total = out.adj_part;
  }
  return out;
}

}  // namespace

double example_loss(const DenoiserConfig& config, int feature_dim, const DenseParams& params,
                    const TrainExample& ex, const NoiseSchedule& schedule,
                    const LossConfig& loss_cfg, double w_A, double b_A, double w_X, double b_X) {
  Tape tape;
  const ForwardOutputs fo = build_forward(tape, config, feature_dim, params, ex.std_adj,
                                          ex.std_feat, ex.t, schedule.T, ex.mask);
  const LossBuild lb = build_loss(tape, fo, ex, schedule, loss_cfg, w_A, b_A, w_X, b_X);
  return tape.value(lb.total)(0, 0);
}

DenseParams example_gradients(const DenoiserConfig& config, int feature_dim,
                              const DenseParams& params, const TrainExample& ex,
                              const NoiseSchedule& schedule, const LossConfig& loss_cfg,
                              double w_A, double b_A, double w_X, double b_X,
                              LossParts* parts_out) {
  Tape tape;
  const ForwardOutputs fo = build_forward(tape, config, feature_dim, params, ex.std_adj,
                                          ex.std_feat, ex.t, schedule.T, ex.mask);
  const LossBuild lb = build_loss(tape, fo, ex, schedule, loss_cfg, w_A, b_A, w_X, b_X);
  tape.backward(lb.total);
  DenseParams grads;
  for (const auto& [name, id] : fo.param_ids) {
    const Eigen::MatrixXd& g = tape.grad(id);
    if (!g.allFinite()) {
      throw NumericError("gradients: non-finite gradient for tensor " + name);
    }
    grads[name] = g;
  }
  if (parts_out != nullptr) {
    parts_out->total = tape.value(lb.total)(0, 0);
    parts_out->adjacency = tape.value(lb.adj_part)(0, 0);
    parts_out->feature = lb.feat_part >= 0 ? tape.value(lb.feat_part)(0, 0) : 0.0;
  }
  return grads;
}

}  // namespace gbd
