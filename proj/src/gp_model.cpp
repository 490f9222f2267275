/*
 * Copyright 2026 The fracbayes authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fracbayes/gp_model.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

#include "fracbayes/rng.hpp"
#include "fracbayes/special.hpp"

namespace fracbayes {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

Eigen::MatrixXd subset_columns(const Eigen::MatrixXd& x, const ModelIndex& index) {
  Eigen::MatrixXd out(x.rows(), index.size());
  for (int c = 0; c < index.size(); ++c) {
    out.col(c) = x.col(index.indices()[c] - 1);
  }
  return out;
}

Eigen::MatrixXd squared_distances(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::VectorXd na = a.rowwise().squaredNorm();
  Eigen::VectorXd nb = b.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = na.replicate(1, b.rows()) + nb.transpose().replicate(a.rows(), 1) -
                       2.0 * a * b.transpose();
  return d2.cwiseMax(0.0);
}

// Cholesky with escalating jitter, 1e-10 * mean diagonal, x10 per retry.
Eigen::LLT<Eigen::MatrixXd> robust_llt(Eigen::MatrixXd m, double* jitter_used = nullptr) {
  const double scale = m.trace() / static_cast<double>(m.rows());
  double jitter = 1e-10 * scale;
  for (int attempt = 0; attempt <= 5; ++attempt) {
    Eigen::MatrixXd trial = m;
    if (attempt > 0) trial.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(trial);
    if (llt.info() == Eigen::Success) {
      if (jitter_used) *jitter_used = (attempt > 0) ? jitter : 0.0;
      return llt;
    }
    jitter *= 10.0;
  }
  throw std::runtime_error("Cholesky failed after jitter escalation");
}

double log_gaussian_marginal(const Eigen::MatrixXd& cov, const Eigen::VectorXd& y) {
  Eigen::LLT<Eigen::MatrixXd> llt = robust_llt(cov);
  Eigen::VectorXd alpha = llt.matrixL().solve(y);
  double logdet = 0.0;
  for (int i = 0; i < cov.rows(); ++i) logdet += std::log(llt.matrixL()(i, i));
  return -0.5 * alpha.squaredNorm() - logdet - 0.5 * static_cast<double>(y.size()) * kLog2Pi;
}

// log density of A at a when A^d ~ Gamma(shape, scale), before truncation.
double log_bandwidth_prior_density(double a, int d, double shape, double scale) {
  double u = std::pow(a, d);
  return (shape - 1.0) * std::log(u) - u / scale - std::lgamma(shape) - shape * std::log(scale) +
         std::log(static_cast<double>(d)) + (d - 1) * std::log(a);
}

}  // namespace

void GpConfig::validate() const {
  if (noise_sd <= 0.0 || bandwidth_shape <= 0.0 || bandwidth_scale <= 0.0 || smoothness <= 0.0 ||
      sup_norm_cap <= 0.0) {
    throw std::invalid_argument("GpConfig: all scalar parameters must be positive");
  }
  if (bandwidth_grid < 3) throw std::invalid_argument("GpConfig: bandwidth grid needs >= 3 nodes");
}

void RegressionData::validate() const {
  if (x.rows() != y.size()) throw std::invalid_argument("RegressionData: row count mismatch");
  if ((x.array() < 0.0).any() || (x.array() > 1.0).any()) {
    throw std::invalid_argument("RegressionData: design entries must lie in [0,1]");
  }
}

double log_fractional_constant(double alpha, int n, double sigma) {
  if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in (0,1]");
  double s2 = sigma * sigma;
  return -0.5 * n * alpha * std::log(2.0 * M_PI * s2) + 0.5 * n * std::log(2.0 * M_PI * s2 / alpha);
}

double log_fractional_marginal(const RegressionData& data, const ModelIndex& index, double a,
                               const GpConfig& cfg, double alpha) {
  cfg.validate();
  if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in (0,1]");
  const int n = data.n();
  const double s2_eff = cfg.noise_sd * cfg.noise_sd / alpha;
  const double logc = log_fractional_constant(alpha, n, cfg.noise_sd);
  if (n == 0) return 0.0;
  if (index.size() == 0) {
    // zero-function model: y ~ N(0, (sigma^2/alpha) I)
    double q = data.y.squaredNorm() / s2_eff;
    return logc - 0.5 * q - 0.5 * n * std::log(2.0 * M_PI * s2_eff);
  }
  if (a <= 0.0) throw std::invalid_argument("inverse bandwidth must be positive");
  Eigen::MatrixXd xi = subset_columns(data.x, index);
  Eigen::MatrixXd cov = (-a * a * squared_distances(xi, xi).array()).exp().matrix();
  cov.diagonal().array() += s2_eff;
  return logc + log_gaussian_marginal(cov, data.y);
}

double bandwidth_floor(const GpConfig& cfg, int n, int d) {
  return std::pow(static_cast<double>(std::max(n, 1)), 1.0 / (2.0 * cfg.smoothness + d));
}

double integrate_bandwidth(const RegressionData& data, const ModelIndex& index,
                           const GpConfig& cfg, double alpha) {
  cfg.validate();
  if (index.size() == 0) {
    throw std::invalid_argument("integrate_bandwidth: subset must be nonempty");
  }
  const int n = data.n();
  const int d = index.size();
  const double a_lo = bandwidth_floor(cfg, n, d);
  const double a_hi = cfg.bandwidth_max_factor * static_cast<double>(std::max(n, 1));
  if (a_hi <= a_lo) {
    throw std::invalid_argument("integrate_bandwidth: empty truncated bandwidth range");
  }
  const int g = cfg.bandwidth_grid;
  std::vector<double> logt(g), node(g), logprior(g), weight(g);
  const double l0 = std::log(a_lo), l1 = std::log(a_hi);
  for (int i = 0; i < g; ++i) {
    logt[i] = l0 + (l1 - l0) * static_cast<double>(i) / (g - 1);
    node[i] = std::exp(logt[i]);
    logprior[i] = log_bandwidth_prior_density(node[i], d, cfg.bandwidth_shape, cfg.bandwidth_scale);
  }
  if (g == 1) {
    weight[0] = 1.0;
  } else {
    weight[0] = 0.5 * (logt[1] - logt[0]);
    weight[g - 1] = 0.5 * (logt[g - 1] - logt[g - 2]);
    for (int i = 1; i < g - 1; ++i) weight[i] = 0.5 * (logt[i + 1] - logt[i - 1]);
  }
  // integrand in log a: f(a) pi(a) a dloga; prior renormalized on the range
  std::vector<double> num(g), den(g);
  if (n == 0) {
    for (int i = 0; i < g; ++i) {
      double base = logprior[i] + std::log(weight[i]) + logt[i];
      den[i] = base;
      num[i] = base;
    }
    return log_sum_exp(num) - log_sum_exp(den);
  }
  // distance matrix shared across grid nodes
  Eigen::MatrixXd xi = subset_columns(data.x, index);
  Eigen::MatrixXd d2 = squared_distances(xi, xi);
  const double s2_eff = cfg.noise_sd * cfg.noise_sd / alpha;
  const double logc = log_fractional_constant(alpha, n, cfg.noise_sd);
  for (int i = 0; i < g; ++i) {
    double base = logprior[i] + std::log(weight[i]) + logt[i];
    den[i] = base;
    Eigen::MatrixXd cov = (-node[i] * node[i] * d2.array()).exp().matrix();
    cov.diagonal().array() += s2_eff;
    num[i] = base + logc + log_gaussian_marginal(cov, data.y);
  }
  return log_sum_exp(num) - log_sum_exp(den);
}

double sample_bandwidth(const GpConfig& cfg, int n, int d, std::uint64_t seed) {
  cfg.validate();
  const double a_lo = bandwidth_floor(cfg, n, d);
  const double a_hi = cfg.bandwidth_max_factor * static_cast<double>(std::max(n, 1));
  // work on U = A^d / scale ~ Gamma(shape, 1) truncated to [u_lo, u_hi]
  const double shape = cfg.bandwidth_shape;
  const double u_lo = std::pow(a_lo, d) / cfg.bandwidth_scale;
  const double u_hi = std::pow(a_hi, d) / cfg.bandwidth_scale;
  Rng rng(seed);
  double u;
  double p_lo = gamma_p(shape, u_lo);
  double p_hi = gamma_p(shape, u_hi);
  if (p_hi - p_lo > 1e-12) {
    double q = p_lo + (p_hi - p_lo) * rng.uniform_pos();
    u = gamma_p_inverse(shape, q, u_lo, u_hi);
  } else {
    // Truncation region carries mass below double resolution; sample the
    // tail exactly by rejection against a truncated exponential envelope
    // touching the density at u_lo.
    double rho = (shape >= 1.0 && u_lo > shape - 1.0) ? 1.0 - (shape - 1.0) / u_lo : 1.0;
    double span = u_hi - u_lo;
    for (;;) {
      double r = rng.uniform_pos();
      u = u_lo - std::log1p(-r * (1.0 - std::exp(-rho * span))) / rho;
      double log_acc = (shape - 1.0) * std::log(u / u_lo) - (1.0 - rho) * (u - u_lo);
      if (std::log(rng.uniform_pos()) <= log_acc) break;
    }
  }
  return std::pow(u * cfg.bandwidth_scale, 1.0 / d);
}

std::vector<double> gp_prior_sample(const ModelIndex& index, double a,
                                    const Eigen::MatrixXd& points, const GpConfig& cfg,
                                    std::uint64_t seed, int max_retries) {
  cfg.validate();
  if (points.cols() != index.size()) {
    throw std::invalid_argument("gp_prior_sample: points dimension must match subset size");
  }
  const int m = static_cast<int>(points.rows());
  if (index.size() == 0) return std::vector<double>(m, 0.0);
  Eigen::MatrixXd cov = (-a * a * squared_distances(points, points).array()).exp().matrix();
  cov.diagonal().array() += 1e-10 * cov.trace() / m + 1e-12;
  Eigen::LLT<Eigen::MatrixXd> llt = robust_llt(cov);
  Eigen::MatrixXd l = llt.matrixL();
  Rng rng(seed);
  for (int attempt = 0; attempt < max_retries; ++attempt) {
    Eigen::VectorXd z(m);
    for (int i = 0; i < m; ++i) z(i) = rng.normal();
    Eigen::VectorXd f = l * z;
    if (f.lpNorm<Eigen::Infinity>() <= cfg.sup_norm_cap) {
      return std::vector<double>(f.data(), f.data() + m);
    }
  }
  throw std::runtime_error(
      "gp_prior_sample: sup-norm rejection budget exhausted; increase the sup-norm cap");
}

std::vector<double> posterior_predictive_mean(const RegressionData& data, const ModelIndex& index,
                                              double a, const GpConfig& cfg, double alpha,
                                              const Eigen::MatrixXd& test_points) {
  cfg.validate();
  const int m = static_cast<int>(test_points.rows());
  if (index.size() == 0) return std::vector<double>(m, 0.0);
  if (test_points.cols() != index.size()) {
    throw std::invalid_argument("posterior_predictive_mean: test point dimension mismatch");
  }
  const double s2_eff = cfg.noise_sd * cfg.noise_sd / alpha;
  Eigen::MatrixXd xi = subset_columns(data.x, index);
  Eigen::MatrixXd cov = (-a * a * squared_distances(xi, xi).array()).exp().matrix();
  cov.diagonal().array() += s2_eff;
  Eigen::LLT<Eigen::MatrixXd> llt = robust_llt(cov);
  Eigen::VectorXd w = llt.solve(data.y);
  Eigen::MatrixXd kstar = (-a * a * squared_distances(test_points, xi).array()).exp().matrix();
  Eigen::VectorXd mean = kstar * w;
  return std::vector<double>(mean.data(), mean.data() + m);
}

}  // namespace fracbayes
