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

#include "fracbayes/density_regression.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracbayes/rng.hpp"
#include "fracbayes/special.hpp"

namespace fracbayes {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_normal_pdf(double y, double mu, double sigma) {
  double z = (y - mu) / sigma;
  return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi;
}

}  // namespace

void MixtureParams::validate(double restriction) const {
  if (weights.empty()) throw std::invalid_argument("MixtureParams: needs at least one component");
  if (weights.size() != y_locations.size() || weights.size() != x_locations.size()) {
    throw std::invalid_argument("MixtureParams: component count mismatch");
  }
  double s = 0.0;
  for (double w : weights) {
    if (w <= restriction / m()) {
      throw std::invalid_argument("MixtureParams: weight at or below the restriction b/m");
    }
    s += w;
  }
  if (std::fabs(s - 1.0) > 1e-12) {
    throw std::invalid_argument("MixtureParams: weights must sum to one");
  }
  for (const auto& mx : x_locations) {
    for (double c : mx) {
      if (c < 0.0 || c > 1.0) {
        throw std::invalid_argument("MixtureParams: x locations must lie in [0,1]");
      }
    }
  }
  if (sigma <= 0.0) throw std::invalid_argument("MixtureParams: sigma must be positive");
}

void DrvsHyper::validate() const {
  if (dirichlet_a <= 0.0) throw std::invalid_argument("DrvsHyper: dirichlet_a must be positive");
  if (restriction_b <= 0.0 || restriction_b >= 1.0) {
    throw std::invalid_argument(
        "DrvsHyper: restriction_b must lie in (0,1); the region {alpha_j > b/m} on the simplex "
        "is empty once b >= 1 (feasibility requires b < m * max-min-mass = 1)");
  }
  if (y_loc_rate <= 0.0 || y_loc_power <= 0.0) {
    throw std::invalid_argument("DrvsHyper: y-location prior parameters must be positive");
  }
}

double model_rate_epsilon(int n, double beta, int d, double tau, double tau1, double tau2) {
  if (n < 2) throw std::invalid_argument("model_rate_epsilon: n must be at least 2");
  if (beta <= 0.0 || tau <= 0.0 || tau1 <= 0.0 || tau2 <= 0.0) {
    throw std::invalid_argument("model_rate_epsilon: constants must be positive");
  }
  const double s = 1.0 + 1.0 / beta + 1.0 / tau;
  const double t0 = ((d + 1) * s + std::max({tau1, 1.0, tau2 / tau})) / (2.0 + (d + 1) / beta);
  const double t = t0 + std::max(0.0, (1.0 - tau1) / 2.0) + 0.01;
  const double ln = std::log(static_cast<double>(n));
  return std::pow(static_cast<double>(n), -beta / (2.0 * beta + d + 1)) * std::pow(ln, t);
}

DrvsSchedule schedule(int n, double beta, int d, double tau, double tau1, double tau2, int p,
                      int d0) {
  (void)p;
  double eps = model_rate_epsilon(n, beta, d, tau, tau1, tau2);
  if (eps >= 1.0) {
    throw ScheduleError("schedule: epsilon = " + std::to_string(eps) +
                            " >= 1 at n = " + std::to_string(n) +
                            "; sigma_n and m are undefined (log(1/epsilon) <= 0)",
                        eps);
  }
  DrvsSchedule sch;
  sch.epsilon = eps;
  sch.beta = beta;
  sch.tau = tau;
  sch.tau1 = tau1;
  sch.tau2 = tau2;
  sch.d0 = d0;
  const double s = 1.0 + 1.0 / beta + 1.0 / tau;
  const double t0 = ((d + 1) * s + std::max({tau1, 1.0, tau2 / tau})) / (2.0 + (d + 1) / beta);
  sch.t = t0 + std::max(0.0, (1.0 - tau1) / 2.0) + 0.01;
  const double log_inv_eps = std::log(1.0 / eps);
  sch.sigma_n = std::pow(eps / log_inv_eps, 1.0 / beta);
  double m_real = std::pow(sch.sigma_n, -d) * std::pow(log_inv_eps, d + d / tau);
  sch.m = std::max(1, static_cast<int>(std::ceil(m_real)));
  return sch;
}

double log_conditional_density(double y, const std::vector<double>& x,
                               const MixtureParams& params) {
  const int m = params.m();
  if (static_cast<int>(x.size()) != params.x_dim()) {
    throw std::invalid_argument("conditional_density: x dimension mismatch");
  }
  const double s2 = params.sigma * params.sigma;
  // gate log-weights, normalized by softmax so an overall scale cancels
  std::vector<double> lg(m);
  for (int j = 0; j < m; ++j) {
    double d2 = 0.0;
    for (std::size_t c = 0; c < x.size(); ++c) {
      double d = x[c] - params.x_locations[j][c];
      d2 += d * d;
    }
    lg[j] = std::log(params.weights[j]) - 0.5 * d2 / s2;
  }
  double lz = log_sum_exp(lg);
  std::vector<double> terms(m);
  for (int j = 0; j < m; ++j) {
    terms[j] = lg[j] - lz + log_normal_pdf(y, params.y_locations[j], params.sigma);
  }
  return log_sum_exp(terms);
}

double conditional_density(double y, const std::vector<double>& x, const MixtureParams& params) {
  return std::exp(log_conditional_density(y, x, params));
}

namespace {

// Vectorized evaluation over the already-projected design block. One code
// path serves both the public entry point and the evidence Monte Carlo.
double frac_loglik_on_block(const Eigen::MatrixXd& xi, const Eigen::VectorXd& y,
                            const MixtureParams& params, double alpha,
                            Eigen::MatrixXd& logits, Eigen::MatrixXd& ydens) {
  const int n = static_cast<int>(y.size());
  const int m = params.m();
  const double s2 = params.sigma * params.sigma;
  logits.resize(n, m);
  ydens.resize(n, m);
  for (int j = 0; j < m; ++j) {
    if (xi.cols() > 0) {
      Eigen::RowVectorXd mu(xi.cols());
      for (int c = 0; c < xi.cols(); ++c) mu(c) = params.x_locations[j][c];
      logits.col(j) = (xi.rowwise() - mu).rowwise().squaredNorm() * (-0.5 / s2);
    } else {
      logits.col(j).setZero();
    }
    logits.col(j).array() += std::log(params.weights[j]);
    ydens.col(j) = (-0.5 * ((y.array() - params.y_locations[j]) / params.sigma).square()).exp();
  }
  Eigen::VectorXd rowmax = logits.rowwise().maxCoeff();
  logits = (logits.colwise() - rowmax).array().exp().matrix();
  Eigen::ArrayXd gate_norm = logits.rowwise().sum().array();
  Eigen::ArrayXd mix = (logits.array() * ydens.array()).rowwise().sum() / gate_norm;
  double ll = mix.max(1e-300).log().sum() -
              n * (std::log(params.sigma) + kLogSqrt2Pi);
  return alpha * ll;
}

}  // namespace

double fractional_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const ModelIndex& index, const MixtureParams& params,
                                 double alpha) {
  if (alpha <= 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must lie in (0,1]");
  Eigen::MatrixXd xi(x.rows(), index.size());
  for (int c = 0; c < index.size(); ++c) xi.col(c) = x.col(index.indices()[c] - 1);
  Eigen::MatrixXd logits, ydens;
  return frac_loglik_on_block(xi, y, params, alpha, logits, ydens);
}

MixtureParams drvs_prior_sample(int m, int x_dim, double sigma, const DrvsHyper& hyper,
                                std::uint64_t seed) {
  hyper.validate();
  if (m < 1) throw std::invalid_argument("drvs_prior_sample: m must be positive");
  Rng rng(seed);
  MixtureParams params;
  params.sigma = sigma;
  params.weights.resize(m);
  const double threshold = hyper.restriction_b / m;
  if (m == 1) {
    params.weights[0] = 1.0;
  } else {
    bool ok = false;
    for (std::size_t attempt = 0; attempt < hyper.rejection_budget; ++attempt) {
      double sum = 0.0;
      for (int j = 0; j < m; ++j) {
        params.weights[j] = rng.gamma(hyper.dirichlet_a / m);
        sum += params.weights[j];
      }
      double mn = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        params.weights[j] /= sum;
        mn = std::min(mn, params.weights[j]);
      }
      if (mn > threshold) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw std::runtime_error(
          "drvs_prior_sample: Dirichlet rejection budget exhausted; restriction_b too large for "
          "m = " +
          std::to_string(m) + " (feasibility requires b < 1, comfortably so for large m)");
    }
  }
  params.y_locations.resize(m);
  params.x_locations.assign(m, std::vector<double>(x_dim));
  for (int j = 0; j < m; ++j) {
    if (hyper.y_loc_power == 1.0) {
      params.y_locations[j] = rng.laplace(0.0, hyper.y_loc_rate);
    } else {
      // density proportional to exp(-a2 |mu|^{tau1}): draw |mu| via
      // Gamma(1/tau1) power transform, then a random sign
      double g = rng.gamma(1.0 / hyper.y_loc_power);
      double mag = std::pow(g / hyper.y_loc_rate, 1.0 / hyper.y_loc_power);
      params.y_locations[j] = (rng.uniform() < 0.5 ? -mag : mag);
    }
    for (int c = 0; c < x_dim; ++c) params.x_locations[j][c] = rng.uniform();
  }
  return params;
}

double drvs_log_prior(const MixtureParams& params, const DrvsHyper& hyper) {
  const int m = params.m();
  const double threshold = hyper.restriction_b / m;
  double lp = 0.0;
  double sum = 0.0;
  for (double w : params.weights) {
    if (w <= threshold && m > 1) return -std::numeric_limits<double>::infinity();
    if (w <= 0.0) return -std::numeric_limits<double>::infinity();
    lp += (hyper.dirichlet_a / m - 1.0) * std::log(w);
    sum += w;
  }
  if (std::fabs(sum - 1.0) > 1e-9) return -std::numeric_limits<double>::infinity();
  for (double mu : params.y_locations) {
    lp += -hyper.y_loc_rate * std::pow(std::fabs(mu), hyper.y_loc_power);
  }
  for (const auto& mx : params.x_locations) {
    for (double c : mx) {
      if (c < 0.0 || c > 1.0) return -std::numeric_limits<double>::infinity();
    }
  }
  return lp;
}

DrvsChain drvs_posterior_sampler(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const ModelIndex& index, int m, double sigma,
                                 const DrvsHyper& hyper, double alpha, std::size_t iters,
                                 std::uint64_t seed, std::size_t thin) {
  hyper.validate();
  Rng rng(seed);
  MixtureParams state = drvs_prior_sample(m, index.size(), sigma, hyper, rng.next_u64());
  auto log_target = [&](const MixtureParams& params) {
    double lp = drvs_log_prior(params, hyper);
    if (!std::isfinite(lp)) return lp;
    if (y.size() == 0) return lp;
    return lp + fractional_log_likelihood(x, y, index, params, alpha);
  };
  double state_lt = log_target(state);

  const double step_y = 0.25;
  const double step_x = 0.15;
  const double step_w = 0.12;
  std::size_t accepted = 0, proposed = 0;
  DrvsChain chain;
  chain.iterations = iters;
  const std::size_t burn = iters / 5;

  for (std::size_t it = 0; it < iters; ++it) {
    // block 1: y locations, joint Gaussian random walk
    {
      MixtureParams cand = state;
      for (int j = 0; j < m; ++j) cand.y_locations[j] += step_y * rng.normal();
      double lt = log_target(cand);
      ++proposed;
      if (std::log(rng.uniform_pos()) <= lt - state_lt) {
        state = std::move(cand);
        state_lt = lt;
        ++accepted;
      }
    }
    // block 2: x locations, reflected random walk (symmetric proposal)
    if (index.size() > 0) {
      MixtureParams cand = state;
      for (int j = 0; j < m; ++j) {
        for (int c = 0; c < index.size(); ++c) {
          double v = cand.x_locations[j][c] + step_x * rng.normal();
          // reflect into [0,1]
          v = std::fabs(v);
          v = std::fmod(v, 2.0);
          if (v > 1.0) v = 2.0 - v;
          cand.x_locations[j][c] = v;
        }
      }
      double lt = log_target(cand);
      ++proposed;
      if (std::log(rng.uniform_pos()) <= lt - state_lt) {
        state = std::move(cand);
        state_lt = lt;
        ++accepted;
      }
    }
    // block 3: weights, symmetric Dirichlet-style perturbation in log space
    if (m > 1) {
      MixtureParams cand = state;
      std::vector<double> lw(m);
      double mx = -std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        lw[j] = std::log(cand.weights[j]) + step_w * rng.normal();
        mx = std::max(mx, lw[j]);
      }
      double s = 0.0;
      for (int j = 0; j < m; ++j) s += std::exp(lw[j] - mx);
      for (int j = 0; j < m; ++j) cand.weights[j] = std::exp(lw[j] - mx) / s;
      // The log-normal perturbation followed by normalization is not exactly
      // symmetric on the simplex; correct with the standard log-weight
      // Jacobian term sum(log w') - sum(log w).
      double jac = 0.0;
      for (int j = 0; j < m; ++j) {
        jac += std::log(cand.weights[j]) - std::log(state.weights[j]);
      }
      double lt = log_target(cand);
      ++proposed;
      if (std::log(rng.uniform_pos()) <= lt - state_lt + jac) {
        state = std::move(cand);
        state_lt = lt;
        ++accepted;
      }
    }
    if (it >= burn && ((it - burn) % thin == 0)) chain.draws.push_back(state);
  }
  chain.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0.0;
  return chain;
}

ModelPosterior drvs_model_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int p,
                                    int d0, const DrvsHyper& hyper,
                                    const DrvsModelPosteriorConfig& cfg, std::uint64_t seed,
                                    std::size_t budget) {
  hyper.validate();
  std::vector<ModelIndex> support = enumerate_subsets(p, d0);
  if (support.size() > budget) {
    throw std::runtime_error("drvs_model_posterior: support exceeds the enumeration budget");
  }
  ModelPosterior post;
  post.alpha = cfg.alpha;
  post.estimator = PosteriorEstimator::kExact;
  std::vector<double> log_weights;
  Rng rng(seed);
  Eigen::MatrixXd logits, ydens;
  for (const ModelIndex& index : support) {
    Rng model_rng = rng.child(Rng::mix(0xD3B5u, static_cast<std::uint64_t>(log_weights.size())));
    Eigen::MatrixXd xi(x.rows(), index.size());
    for (int c = 0; c < index.size(); ++c) xi.col(c) = x.col(index.indices()[c] - 1);
    std::vector<double> lw(cfg.n_draws);
    for (std::size_t i = 0; i < cfg.n_draws; ++i) {
      MixtureParams draw =
          drvs_prior_sample(cfg.m, index.size(), cfg.sigma, hyper, model_rng.next_u64());
      lw[i] = (y.size() == 0) ? 0.0
                              : frac_loglik_on_block(xi, y, draw, cfg.alpha, logits, ydens);
    }
    double lse = log_sum_exp(lw);
    double log_mean = lse - std::log(static_cast<double>(cfg.n_draws));
    // normalized weights for ESS and the delta-method se of log evidence
    double sum_sq = 0.0;
    for (double v : lw) {
      double w = std::exp(v - lse);
      sum_sq += w * w;
    }
    double ess = 1.0 / sum_sq;
    double n_d = static_cast<double>(cfg.n_draws);
    // Var(mean w) / mean(w)^2 with w normalized by exp(lse)
    double var_ratio = std::max(0.0, sum_sq - 1.0 / n_d);
    double se_log = std::sqrt(var_ratio);

    ModelPosteriorEntry e;
    e.index = index;
    e.log_prior = std::log(gpvs_prior_weight(index, p, d0));
    e.log_marginal = log_mean;
    e.ess = ess;
    e.ess_flag = ess < cfg.ess_flag_threshold;
    e.mc_se_log = se_log;
    log_weights.push_back(e.log_prior + e.log_marginal);
    post.entries.push_back(std::move(e));
  }
  double lz = log_sum_exp(log_weights);
  for (std::size_t i = 0; i < post.entries.size(); ++i) {
    post.entries[i].probability = std::exp(log_weights[i] - lz);
  }
  return post;
}

}  // namespace fracbayes
