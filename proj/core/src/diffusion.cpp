// SPDX-License-Identifier: Apache-2.0
#include "gbd/diffusion.hpp"

#include <cmath>
#include <stdexcept>

#include "gbd/errors.hpp"
#include "gbd/samplers.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

double thicken(double g, double p) { return g + p * (1.0 - g); }

double thicken_logit(double logit_g, double logit_p) {
  // ln(e^z + e^p + e^{z+p}), stabilized around the largest exponent.
  const double z = logit_g;
  const double p = logit_p;
  const double m = std::max(std::max(z, p), z + p);
  return m + std::log(std::exp(z - m) + std::exp(p - m) + std::exp(z + p - m));
}

namespace {

void check_unit_interval(const Eigen::MatrixXd& m, const char* what) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!(m(i, j) > 0.0 && m(i, j) < 1.0)) {
        throw std::domain_error(std::string(what) + ": values must lie strictly inside (0,1)");
      }
    }
  }
}

void check_original_domain(const DiffusionState& s, const char* what) {
  if (s.domain != Domain::kOriginal) {
    throw std::domain_error(std::string(what) + ": state must be in the original domain");
  }
}

void check_t(int t, const NoiseSchedule& schedule, const char* what) {
  if (t < 1 || t > schedule.T) {
    throw std::out_of_range(std::string(what) + ": t must lie in [1, T]");
  }
}

// Applies `fn(i, j, eta)` over the upper triangle including the diagonal and
// mirrors the result; masked rows/columns are left at zero.
template <typename Fn>
Eigen::MatrixXd sample_symmetric(int n, const DiffusionState& ref,
                                 const ConcentrationField& eta, Fn&& fn) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (!ref.active(i)) continue;
    for (int j = i; j < n; ++j) {
      if (!ref.active(j)) continue;
      const double v = fn(i, j, eta.eta_edges(i, j));
      out(i, j) = v;
      out(j, i) = v;
    }
  }
  return out;
}

template <typename Fn>
Eigen::MatrixXd sample_features(int n, int d, const DiffusionState& ref,
                                const ConcentrationField& eta, Fn&& fn) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, d);
  for (int i = 0; i < n; ++i) {
    if (!ref.active(i)) continue;
    for (int k = 0; k < d; ++k) {
      out(i, k) = fn(i, k, eta.eta_nodes(i));
    }
  }
  return out;
}

}  // namespace

DiffusionState forward_marginal_sample(const DiffusionState& g0, int t,
                                       const NoiseSchedule& schedule,
                                       const ConcentrationField& eta, RngStream& rng) {
  check_original_domain(g0, "forward_marginal_sample");
  check_t(t, schedule, "forward_marginal_sample");
  check_unit_interval(g0.adjacency_values, "forward_marginal_sample");
  check_unit_interval(g0.feature_values, "forward_marginal_sample");
  const double alpha_t = schedule.alpha(t);
  DiffusionState out;
  out.t = t;
  out.domain = Domain::kOriginal;
  out.node_mask = g0.node_mask;
  out.adjacency_values = sample_symmetric(
      g0.n(), g0, eta, [&](int i, int j, double e) {
        const double v0 = g0.adjacency_values(i, j);
        return sample_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
      });
  out.feature_values = sample_features(
      g0.n(), g0.feature_dim(), g0, eta, [&](int i, int k, double e) {
        const double v0 = g0.feature_values(i, k);
        return sample_beta(e * alpha_t * v0, e * (1.0 - alpha_t * v0), rng);
      });
  return out;
}

DiffusionState forward_step(const DiffusionState& g_prev, const DiffusionState& g0, int t,
                            const NoiseSchedule& schedule, const ConcentrationField& eta,
                            RngStream& rng) {
  check_original_domain(g_prev, "forward_step");
  check_original_domain(g0, "forward_step");
  check_t(t, schedule, "forward_step");
  const double alpha_t = schedule.alpha(t);
  const double d_alpha = schedule.alpha(t - 1) - alpha_t;
  if (!(d_alpha > 0.0)) {
    throw std::domain_error("forward_step: degenerate schedule step (alpha_{t-1} == alpha_t)");
  }
  DiffusionState out;
  out.t = t;
  out.domain = Domain::kOriginal;
  out.node_mask = g_prev.node_mask;
  out.adjacency_values = sample_symmetric(
      g_prev.n(), g_prev, eta, [&](int i, int j, double e) {
        const double v0 = g0.adjacency_values(i, j);
        const double q = sample_beta(e * alpha_t * v0, e * d_alpha * v0, rng);
        return g_prev.adjacency_values(i, j) * q;
      });
  out.feature_values = sample_features(
      g_prev.n(), g_prev.feature_dim(), g_prev, eta, [&](int i, int k, double e) {
        const double v0 = g0.feature_values(i, k);
        const double q = sample_beta(e * alpha_t * v0, e * d_alpha * v0, rng);
        return g_prev.feature_values(i, k) * q;
      });
  return out;
}

DiffusionState reverse_step(const DiffusionState& g_t, const Eigen::MatrixXd& a0_hat,
                            const Eigen::MatrixXd& x0_hat, int t,
                            const NoiseSchedule& schedule, const ConcentrationField& eta,
                            RngStream& rng) {
  check_original_domain(g_t, "reverse_step");
  check_t(t, schedule, "reverse_step");
  check_unit_interval(a0_hat, "reverse_step: g0_hat");
  check_unit_interval(x0_hat, "reverse_step: g0_hat");
  const double alpha_t = schedule.alpha(t);
  const double alpha_prev = schedule.alpha(t - 1);
  const double d_alpha = alpha_prev - alpha_t;
  DiffusionState out;
  out.t = t - 1;
  out.domain = Domain::kOriginal;
  out.node_mask = g_t.node_mask;
  out.adjacency_values = sample_symmetric(
      g_t.n(), g_t, eta, [&](int i, int j, double e) {
        const double h = a0_hat(i, j);
        const double p = sample_beta(e * d_alpha * h, e * (1.0 - alpha_prev * h), rng);
        return thicken(g_t.adjacency_values(i, j), p);
      });
  out.feature_values = sample_features(
      g_t.n(), g_t.feature_dim(), g_t, eta, [&](int i, int k, double e) {
        const double h = x0_hat(i, k);
        const double p = sample_beta(e * d_alpha * h, e * (1.0 - alpha_prev * h), rng);
        return thicken(g_t.feature_values(i, k), p);
      });
  return out;
}

DiffusionState reverse_step_logit(const DiffusionState& logit_g_t, const Eigen::MatrixXd& a0_hat,
                                  const Eigen::MatrixXd& x0_hat, int t,
                                  const NoiseSchedule& schedule, const ConcentrationField& eta,
                                  RngStream& rng) {
  if (logit_g_t.domain != Domain::kLogit) {
    throw std::domain_error("reverse_step_logit: state must be in the logit domain");
  }
  check_t(t, schedule, "reverse_step_logit");
  check_unit_interval(a0_hat, "reverse_step_logit: g0_hat");
  check_unit_interval(x0_hat, "reverse_step_logit: g0_hat");
  const double alpha_t = schedule.alpha(t);
  const double alpha_prev = schedule.alpha(t - 1);
  const double d_alpha = alpha_prev - alpha_t;
  DiffusionState out;
  out.t = t - 1;
  out.domain = Domain::kLogit;
  out.node_mask = logit_g_t.node_mask;
  out.adjacency_values = sample_symmetric(
      logit_g_t.n(), logit_g_t, eta, [&](int i, int j, double e) {
        const double h = a0_hat(i, j);
        const double lp = sample_logit_beta(e * d_alpha * h, e * (1.0 - alpha_prev * h), rng);
        return thicken_logit(logit_g_t.adjacency_values(i, j), lp);
      });
  out.feature_values = sample_features(
      logit_g_t.n(), logit_g_t.feature_dim(), logit_g_t, eta, [&](int i, int k, double e) {
        const double h = x0_hat(i, k);
        const double lp = sample_logit_beta(e * d_alpha * h, e * (1.0 - alpha_prev * h), rng);
        return thicken_logit(logit_g_t.feature_values(i, k), lp);
      });
  return out;
}

DiffusionState sample_prior(int n_nodes, const Eigen::VectorXd& prior_mean_feat,
                            double prior_mean_adj, const NoiseSchedule& schedule,
                            const ConcentrationField& eta, Domain domain, RngStream& rng) {
  if (!(prior_mean_adj > 0.0 && prior_mean_adj < 1.0)) {
    throw std::domain_error("sample_prior: prior mean must lie in (0,1)");
  }
  const double alpha_T = schedule.alpha(schedule.T);
  DiffusionState out;
  out.t = schedule.T;
  out.domain = domain;
  const bool logit = domain == Domain::kLogit;
  out.adjacency_values = sample_symmetric(
      n_nodes, out, eta, [&](int, int, double e) {
        const double a = e * alpha_T * prior_mean_adj;
        const double b = e * (1.0 - alpha_T * prior_mean_adj);
        return logit ? sample_logit_beta(a, b, rng) : sample_beta(a, b, rng);
      });
  const int d = static_cast<int>(prior_mean_feat.size());
  out.feature_values = sample_features(
      n_nodes, d, out, eta, [&](int, int k, double e) {
        const double m = prior_mean_feat(k);
        if (!(m > 0.0 && m < 1.0)) {
          throw std::domain_error("sample_prior: feature prior mean must lie in (0,1)");
        }
        const double a = e * alpha_T * m;
        const double b = e * (1.0 - alpha_T * m);
        return logit ? sample_logit_beta(a, b, rng) : sample_beta(a, b, rng);
      });
  return out;
}

Graph ancestral_sample(const Predictor& predictor, int n_nodes, const NoiseSchedule& schedule,
                       const ConcentrationField& eta, const TransformParams& transform_params,
                       const AncestralConfig& config, RngStream& rng,
                       std::vector<TrajectorySnapshot>* trajectory) {
  if (n_nodes < 1) throw ConfigError("ancestral_sample: n_nodes must be >= 1");
  Eigen::VectorXd mean_feat = config.prior_mean_feat;
  if (mean_feat.size() == 0 && config.feature_dim > 0) {
    mean_feat = Eigen::VectorXd::Constant(config.feature_dim, 0.5);
  }
  DiffusionState state = sample_prior(n_nodes, mean_feat, config.prior_mean_adj, schedule, eta,
                                      config.domain, rng);

  auto record = [&](const DiffusionState& s, int t) {
    if (trajectory == nullptr || config.snapshot_stride <= 0) return;
    if (t % config.snapshot_stride != 0 && t != 0) return;
    TrajectorySnapshot snap;
    snap.t = t;
    if (s.domain == Domain::kLogit) {
      snap.adjacency_values = s.adjacency_values.unaryExpr(
          [](double z) { return clamp_unit(sigmoid(z)); });
    } else {
      snap.adjacency_values = s.adjacency_values;
    }
    trajectory->push_back(std::move(snap));
  };

  for (int t = schedule.T; t >= 1; --t) {
    auto [a_raw, x_raw] = predictor(state, t);
    for (int i = 0; i < a_raw.rows(); ++i) {
      for (int j = 0; j < a_raw.cols(); ++j) {
        if (!(a_raw(i, j) > 0.0 && a_raw(i, j) < 1.0)) {
          throw NumericError("ancestral_sample: predictor adjacency output outside (0,1)");
        }
      }
    }
    for (int i = 0; i < x_raw.rows(); ++i) {
      for (int j = 0; j < x_raw.cols(); ++j) {
        if (!(x_raw(i, j) > 0.0 && x_raw(i, j) < 1.0)) {
          throw NumericError("ancestral_sample: predictor feature output outside (0,1)");
        }
      }
    }
    const Eigen::MatrixXd a0_hat = transform_params.w_A * a_raw.array() + transform_params.b_A;
    const Eigen::MatrixXd x0_hat = transform_params.w_X * x_raw.array() + transform_params.b_X;
    state = config.domain == Domain::kLogit
                ? reverse_step_logit(state, a0_hat, x0_hat, t, schedule, eta, rng)
                : reverse_step(state, a0_hat, x0_hat, t, schedule, eta, rng);
    record(state, t - 1);
  }

  Eigen::MatrixXd adj = state.adjacency_values;
  Eigen::MatrixXd feats = state.feature_values;
  if (config.domain == Domain::kLogit) {
    adj = adj.unaryExpr([](double z) { return clamp_unit(sigmoid(z)); });
    feats = feats.unaryExpr([](double z) { return clamp_unit(sigmoid(z)); });
  }
  return inverse_transform_quantize(adj, feats, transform_params, config.threshold);
}

}  // namespace gbd
