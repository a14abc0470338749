// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include "gbd/schedule.hpp"
#include "gbd/state.hpp"

namespace gbd {

struct LossConfig {
  double omega = 0.01;       // correction weight, in [0,1]
  double gamma_node = 0.5;   // node-loss influence factor, >= 0

  void validate() const;
};

// Per-entry closed-form KL between the predicted and true reverse
// transitions:
//   kl_beta(eta*(a_{t-1}-a_t)*g0_hat, eta*(1-a_{t-1}*g0_hat),
//           eta*(a_{t-1}-a_t)*g0,     eta*(1-a_{t-1}*g0)).
double sampling_loss_entry(double g0, double g0_hat, double alpha_t, double alpha_prev,
                           double eta);

// Per-entry closed-form KL between the implied and true forward marginals:
//   kl_beta(eta*a_t*g0_hat, eta*(1-a_t*g0_hat),
//           eta*a_t*g0,     eta*(1-a_t*g0)).
double correction_loss_entry(double g0, double g0_hat, double alpha_t, double eta);

// Same losses evaluated through the Bregman form generated by ln B(.,.).
double sampling_loss_entry_bregman(double g0, double g0_hat, double alpha_t, double alpha_prev,
                                   double eta);
double correction_loss_entry_bregman(double g0, double g0_hat, double alpha_t, double eta);

// Closed-form derivatives with respect to g0_hat.
double sampling_loss_grad_entry(double g0, double g0_hat, double alpha_t, double alpha_prev,
                                double eta);
double correction_loss_grad_entry(double g0, double g0_hat, double alpha_t, double eta);

// Gradient of total_loss with respect to the adjacency and feature
// predictions.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> total_loss_gradient(
    const Eigen::MatrixXd& adj_g0, const Eigen::MatrixXd& adj_g0_hat,
    const Eigen::MatrixXd& feat_g0, const Eigen::MatrixXd& feat_g0_hat, int t,
    const NoiseSchedule& schedule, const ConcentrationField& eta_field, const LossConfig& cfg,
    const std::vector<bool>& node_mask = {});

// Elementwise matrix versions; shapes must agree.
Eigen::MatrixXd sampling_loss(const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g0_hat, int t,
                              const NoiseSchedule& schedule, const Eigen::MatrixXd& eta);
Eigen::MatrixXd correction_loss(const Eigen::MatrixXd& g0, const Eigen::MatrixXd& g0_hat, int t,
                                const NoiseSchedule& schedule, const Eigen::MatrixXd& eta);

// (1-omega) * sampling + omega * correction, averaged over the unmasked
// strict upper triangle of the adjacency, plus gamma_node times the average
// over unmasked feature entries.
double total_loss(const Eigen::MatrixXd& adj_g0, const Eigen::MatrixXd& adj_g0_hat,
                  const Eigen::MatrixXd& feat_g0, const Eigen::MatrixXd& feat_g0_hat, int t,
                  const NoiseSchedule& schedule, const ConcentrationField& eta_field,
                  const LossConfig& cfg, const std::vector<bool>& node_mask = {});

}  // namespace gbd
