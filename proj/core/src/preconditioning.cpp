// SPDX-License-Identifier: Apache-2.0
#include "gbd/preconditioning.hpp"

#include <cmath>
#include <stdexcept>

#include "gbd/errors.hpp"
#include "gbd/special_functions.hpp"

namespace gbd {

namespace {

void check_eta(double eta) {
  if (!(eta > 0.0)) throw std::domain_error("preconditioning: eta must be > 0");
}

void check_alpha(double alpha_t) {
  if (!(alpha_t >= 0.0 && alpha_t < 1.0)) {
    throw std::domain_error("preconditioning: alpha_t must lie in [0,1)");
  }
}

}  // namespace

Moments binary_moments(double p, double a_min, double a_max, double alpha_t, double eta) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_moments: p must lie in [0,1]");
  if (!(a_min > 0.0 && a_min <= a_max && a_max < 1.0)) {
    throw std::domain_error("binary_moments: requires 0 < a_min <= a_max < 1");
  }
  check_alpha(alpha_t);
  check_eta(eta);
  Moments m;
  m.mean = alpha_t * (p * a_max + (1.0 - p) * a_min);
  const double spread = a_max - a_min;
  m.var = (m.mean - m.mean * m.mean) / (eta + 1.0) +
          eta / (eta + 1.0) * (alpha_t * alpha_t * p * (1.0 - p) * spread * spread);
  return m;
}

Moments uniform_moments(double x_min, double x_max, double alpha_t, double eta) {
  if (!(x_min > 0.0 && x_min < x_max && x_max < 1.0)) {
    throw std::domain_error("uniform_moments: requires 0 < x_min < x_max < 1");
  }
  check_alpha(alpha_t);
  check_eta(eta);
  Moments m;
  m.mean = 0.5 * alpha_t * (x_min + x_max);
  const double spread = x_max - x_min;
  m.var = (m.mean - m.mean * m.mean) / (eta + 1.0) +
          eta / (12.0 * (eta + 1.0)) * (alpha_t * alpha_t * spread * spread);
  return m;
}

Moments logit_moments_binary(double p, double a_min, double a_max, double alpha_t, double eta) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("logit_moments_binary: p in [0,1]");
  if (!(a_min > 0.0 && a_min <= a_max && a_max < 1.0)) {
    throw std::domain_error("logit_moments_binary: requires 0 < a_min <= a_max < 1");
  }
  check_eta(eta);
  if (!(alpha_t > 0.0 && alpha_t < 1.0)) {
    throw std::domain_error("logit_moments_binary: alpha_t must lie in (0,1)");
  }
  const double lo_a = eta * alpha_t * a_min;
  const double hi_a = eta * alpha_t * a_max;
  const double lo_b = eta * (1.0 - alpha_t * a_min);
  const double hi_b = eta * (1.0 - alpha_t * a_max);
  if (!(lo_a > 0.0 && hi_b > 0.0)) {
    throw std::domain_error("logit_moments_binary: assembled beta shapes must be positive");
  }
  const double q = 1.0 - p;

  const double e_psi_a = p * digamma(hi_a) + q * digamma(lo_a);
  const double e_psi_b = p * digamma(hi_b) + q * digamma(lo_b);
  const double var_psi_a = p * q * std::pow(digamma(hi_a) - digamma(lo_a), 2);
  const double var_psi_b = p * q * std::pow(digamma(hi_b) - digamma(lo_b), 2);
  const double e_tri_a = p * trigamma(hi_a) + q * trigamma(lo_a);
  const double e_tri_b = p * trigamma(hi_b) + q * trigamma(lo_b);

  Moments m;
  m.mean = e_psi_a - e_psi_b;
  m.var = e_tri_a + e_tri_b + var_psi_a + var_psi_b;
  return m;
}

Moments logit_moments_uniform(double x_min, double x_max, double alpha_t, double eta, int K) {
  if (K < 2) throw ConfigError("logit_moments_uniform: K must be >= 2");
  if (!(x_min > 0.0 && x_min < x_max && x_max < 1.0)) {
    throw std::domain_error("logit_moments_uniform: requires 0 < x_min < x_max < 1");
  }
  check_eta(eta);
  if (!(alpha_t > 0.0 && alpha_t < 1.0)) {
    throw std::domain_error("logit_moments_uniform: alpha_t must lie in (0,1)");
  }
  const double c = eta * alpha_t;
  const double span = x_max - x_min;

  const double e_psi_a = (log_gamma(c * x_max) - log_gamma(c * x_min)) / (c * span);
  const double e_psi_b =
      (log_gamma(eta - c * x_min) - log_gamma(eta - c * x_max)) / (c * span);
  const double e_tri_a = (digamma(c * x_max) - digamma(c * x_min)) / (c * span);
  const double e_tri_b = (digamma(eta - c * x_min) - digamma(eta - c * x_max)) / (c * span);

  // Trapezoid averages of psi^2 over the uniform support.
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (int i = 0; i <= K; ++i) {
    const double x = x_min + span * static_cast<double>(i) / static_cast<double>(K);
    const double w = (i == 0 || i == K) ? 0.5 : 1.0;
    sum_a += w * std::pow(digamma(c * x), 2);
    sum_b += w * std::pow(digamma(eta - c * x), 2);
  }
  const double var_psi_a = std::max(sum_a / K - e_psi_a * e_psi_a, 0.0);
  const double var_psi_b = std::max(sum_b / K - e_psi_b * e_psi_b, 0.0);

  Moments m;
  m.mean = e_psi_a - e_psi_b;
  m.var = e_tri_a + e_tri_b + var_psi_a + var_psi_b;
  return m;
}

PrecondStats PrecondStats::build(Domain domain, const NoiseSchedule& schedule,
                                 const ChannelSource& adj_source,
                                 const std::vector<ChannelSource>& feat_sources, double eta,
                                 int trapezoid_k) {
  PrecondStats stats;
  stats.domain = domain;
  stats.trapezoid_k = trapezoid_k;
  auto moments_for = [&](const ChannelSource& src, double alpha_t) -> Moments {
    if (domain == Domain::kOriginal) {
      return src.binary ? binary_moments(src.p, src.lo, src.hi, alpha_t, eta)
                        : uniform_moments(src.lo, src.hi, alpha_t, eta);
    }
    return src.binary ? logit_moments_binary(src.p, src.lo, src.hi, alpha_t, eta)
                      : logit_moments_uniform(src.lo, src.hi, alpha_t, eta, trapezoid_k);
  };
  stats.adj.reserve(static_cast<std::size_t>(schedule.T));
  for (int t = 1; t <= schedule.T; ++t) {
    stats.adj.push_back(moments_for(adj_source, schedule.alpha(t)));
  }
  stats.feat.resize(feat_sources.size());
  for (std::size_t c = 0; c < feat_sources.size(); ++c) {
    stats.feat[c].reserve(static_cast<std::size_t>(schedule.T));
    for (int t = 1; t <= schedule.T; ++t) {
      stats.feat[c].push_back(moments_for(feat_sources[c], schedule.alpha(t)));
    }
  }
  for (const Moments& m : stats.adj) {
    if (!(m.var > 0.0)) throw NumericError("preconditioning: nonpositive adjacency variance");
  }
  for (const auto& ch : stats.feat) {
    for (const Moments& m : ch) {
      if (!(m.var > 0.0)) throw NumericError("preconditioning: nonpositive feature variance");
    }
  }
  return stats;
}

PrecondStats PrecondStats::identity(Domain domain, int T, int feature_channels) {
  PrecondStats stats;
  stats.domain = domain;
  stats.adj.assign(static_cast<std::size_t>(T), Moments{0.0, 1.0});
  stats.feat.assign(static_cast<std::size_t>(feature_channels),
                    std::vector<Moments>(static_cast<std::size_t>(T), Moments{0.0, 1.0}));
  return stats;
}

const Moments& PrecondStats::adjacency_at(int t) const {
  if (t < 1 || t > static_cast<int>(adj.size())) {
    throw std::out_of_range("preconditioning: t outside [1, T]");
  }
  return adj[static_cast<std::size_t>(t - 1)];
}

const Moments& PrecondStats::feature_at(int channel, int t) const {
  if (channel < 0 || channel >= static_cast<int>(feat.size())) {
    throw std::out_of_range("preconditioning: channel out of range");
  }
  if (t < 1 || t > static_cast<int>(feat[static_cast<std::size_t>(channel)].size())) {
    throw std::out_of_range("preconditioning: t outside [1, T]");
  }
  return feat[static_cast<std::size_t>(channel)][static_cast<std::size_t>(t - 1)];
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> standardize(const DiffusionState& state,
                                                        const PrecondStats& stats) {
  if (state.domain != stats.domain) {
    throw ConfigError("standardize: stats domain does not match state domain");
  }
  const int n = state.n();
  const int d = state.feature_dim();
  if (d != static_cast<int>(stats.feat.size())) {
    throw ConfigError("standardize: feature channel count mismatch");
  }
  const Moments& ma = stats.adjacency_at(state.t);
  if (ma.var < 1e-12) throw NumericError("standardize: adjacency variance below guard");
  const double sa = std::sqrt(ma.var);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (!state.active(i)) continue;
    for (int j = 0; j < n; ++j) {
      if (!state.active(j)) continue;
      adj(i, j) = (state.adjacency_values(i, j) - ma.mean) / sa;
    }
  }
  Eigen::MatrixXd feats = Eigen::MatrixXd::Zero(n, d);
  for (int k = 0; k < d; ++k) {
    const Moments& mf = stats.feature_at(k, state.t);
    if (mf.var < 1e-12) throw NumericError("standardize: feature variance below guard");
    const double sf = std::sqrt(mf.var);
    for (int i = 0; i < n; ++i) {
      if (!state.active(i)) continue;
      feats(i, k) = (state.feature_values(i, k) - mf.mean) / sf;
    }
  }
  return {std::move(adj), std::move(feats)};
}

}  // namespace gbd
