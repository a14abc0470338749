// SPDX-License-Identifier: Apache-2.0
#include "gbd/losses.hpp"

#include <stdexcept>

#include "gbd/beta_kl.hpp"
#include "gbd/errors.hpp"

namespace gbd {

void LossConfig::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw ConfigError("loss: omega must lie in [0,1]");
  if (!(gamma_node >= 0.0)) throw ConfigError("loss: gamma_node must be >= 0");
}

namespace {

void check_value(double v, const char* what) {
  if (!(v > 0.0 && v < 1.0)) {
    throw std::domain_error(std::string(what) + ": values must lie strictly inside (0,1)");
  }
}

}  // namespace

double sampling_loss_entry(double g0, double g0_hat, double alpha_t, double alpha_prev,
                           double eta) {
  check_value(g0, "sampling_loss");
  check_value(g0_hat, "sampling_loss");
  const double d_alpha = alpha_prev - alpha_t;
  return kl_beta(eta * d_alpha * g0_hat, eta * (1.0 - alpha_prev * g0_hat),
                 eta * d_alpha * g0, eta * (1.0 - alpha_prev * g0));
}

double correction_loss_entry(double g0, double g0_hat, double alpha_t, double eta) {
  check_value(g0, "correction_loss");
  check_value(g0_hat, "correction_loss");
  return kl_beta(eta * alpha_t * g0_hat, eta * (1.0 - alpha_t * g0_hat),
                 eta * alpha_t * g0, eta * (1.0 - alpha_t * g0));
}

double sampling_loss_entry_bregman(double g0, double g0_hat, double alpha_t, double alpha_prev,
                                   double eta) {
  const double d_alpha = alpha_prev - alpha_t;
  return bregman_log_beta(eta * d_alpha * g0, eta * (1.0 - alpha_prev * g0),
                          eta * d_alpha * g0_hat, eta * (1.0 - alpha_prev * g0_hat));
}

double correction_loss_entry_bregman(double g0, double g0_hat, double alpha_t, double eta) {
  return bregman_log_beta(eta * alpha_t * g0, eta * (1.0 - alpha_t * g0),
                          eta * alpha_t * g0_hat, eta * (1.0 - alpha_t * g0_hat));
}

namespace {

void check_t_range(int t, const NoiseSchedule& schedule) {
  if (t < 2 || t > schedule.T) {
    throw std::domain_error("loss: t must lie in [2, T]");
  }
}

template <typename Fn>
Eigen::MatrixXd map_entries(const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g0_hat,
                            const Eigen::MatrixXd& eta, Fn&& fn) {
  if (g0.rows() != g0_hat.rows() || g0.cols() != g0_hat.cols() || g0.rows() != eta.rows() ||
      g0.cols() != eta.cols()) {
    throw ConfigError("loss: shape mismatch");
  }
  Eigen::MatrixXd out(g0.rows(), g0.cols());
  for (int i = 0; i < g0.rows(); ++i) {
    for (int j = 0; j < g0.cols(); ++j) {
      out(i, j) = fn(g0(i, j), g0_hat(i, j), eta(i, j));
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXd sampling_loss(const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g0_hat, int t,
                              const NoiseSchedule& schedule, const Eigen::MatrixXd& eta) {
  check_t_range(t, schedule);
  const double alpha_t = schedule.alpha(t);
  const double alpha_prev = schedule.alpha(t - 1);
  return map_entries(g0, g0_hat, eta, [&](double a, double b, double e) {
    return sampling_loss_entry(a, b, alpha_t, alpha_prev, e);
  });
}

Eigen::MatrixXd correction_loss(const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g0_hat, int t,
                                const NoiseSchedule& schedule, const Eigen::MatrixXd& eta) {
  check_t_range(t, schedule);
  const double alpha_t = schedule.alpha(t);
  return map_entries(g0, g0_hat, eta, [&](double a, double b, double e) {
    return correction_loss_entry(a, b, alpha_t, e);
  });
}

double total_loss(const Eigen::MatrixXd& adj_g0, const Eigen::MatrixXd& adj_g0_hat,
                  const Eigen::MatrixXd& feat_g0, const Eigen::MatrixXd& feat_g0_hat, int t,
                  const NoiseSchedule& schedule, const ConcentrationField& eta_field,
                  const LossConfig& cfg, const std::vector<bool>& node_mask) {
  cfg.validate();
  check_t_range(t, schedule);
  if (adj_g0.rows() != adj_g0_hat.rows() || adj_g0.cols() != adj_g0_hat.cols() ||
      feat_g0.rows() != feat_g0_hat.rows() || feat_g0.cols() != feat_g0_hat.cols()) {
    throw ConfigError("total_loss: shape mismatch");
  }
  const double alpha_t = schedule.alpha(t);
  const double alpha_prev = schedule.alpha(t - 1);
  auto active = [&node_mask](int i) {
    return node_mask.empty() || node_mask[static_cast<std::size_t>(i)];
  };
  auto entry = [&](double g0, double g0_hat, double eta) {
    const double ls = cfg.omega < 1.0
                          ? sampling_loss_entry(g0, g0_hat, alpha_t, alpha_prev, eta)
                          : 0.0;
    const double lc = cfg.omega > 0.0 ? correction_loss_entry(g0, g0_hat, alpha_t, eta) : 0.0;
    return (1.0 - cfg.omega) * ls + cfg.omega * lc;
  };

  const int n = static_cast<int>(adj_g0.rows());
  double adj_sum = 0.0;
  long adj_count = 0;
  for (int i = 0; i < n; ++i) {
    if (!active(i)) continue;
    for (int j = i + 1; j < n; ++j) {
      if (!active(j)) continue;
      adj_sum += entry(adj_g0(i, j), adj_g0_hat(i, j), eta_field.eta_edges(i, j));
      ++adj_count;
    }
  }
  double feat_sum = 0.0;
  long feat_count = 0;
  for (int i = 0; i < feat_g0.rows(); ++i) {
    if (!active(i)) continue;
    for (int k = 0; k < feat_g0.cols(); ++k) {
      feat_sum += entry(feat_g0(i, k), feat_g0_hat(i, k), eta_field.eta_nodes(i));
      ++feat_count;
    }
  }
  double loss = adj_count > 0 ? adj_sum / static_cast<double>(adj_count) : 0.0;
  if (feat_count > 0) loss += cfg.gamma_node * feat_sum / static_cast<double>(feat_count);
  return loss;
}

}  // namespace gbd
