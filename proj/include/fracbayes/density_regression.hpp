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

#ifndef FRACBAYES_DENSITY_REGRESSION_HPP_
#define FRACBAYES_DENSITY_REGRESSION_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fracbayes/model_index.hpp"
#include "fracbayes/model_space.hpp"

namespace fracbayes {

// Parameters of the covariate-gated location mixture of normals:
// p(y|x) = sum_j gate_j(x) phi(y; mu_j^y, sigma) with gates
// gate_j(x) proportional to alpha_j exp(-||x - mu_j^x||^2 / (2 sigma^2)).
struct MixtureParams {
  std::vector<double> weights;            // simplex, each > restriction/m
  std::vector<double> y_locations;        // mu_j^y
  std::vector<std::vector<double>> x_locations;  // mu_j^x in [0,1]^{|I|}
  double sigma = 0.25;

  int m() const { return static_cast<int>(weights.size()); }
  int x_dim() const { return x_locations.empty() ? 0 : static_cast<int>(x_locations[0].size()); }
  void validate(double restriction) const;
};

// Deterministic (epsilon, sigma_n, m) schedule for a subset of size d at
// sample size n.
struct DrvsSchedule {
  double epsilon = 0.0;
  double sigma_n = 0.0;
  int m = 1;
  double beta = 1.0, tau = 1.0, tau1 = 1.0, tau2 = 1.0, t = 0.0;
  int d0 = 1;
};

struct ScheduleError : std::runtime_error {
  double epsilon;
  ScheduleError(const std::string& msg, double eps) : std::runtime_error(msg), epsilon(eps) {}
};

// epsilon_{n,I} = n^{-beta/(2 beta + d + 1)} (log n)^t, with
// t = t0 + max{0, (1-tau1)/2} + 0.01 and
// t0 = ((d+1) s + max{tau1, 1, tau2/tau}) / (2 + (d+1)/beta), s = 1 + 1/beta + 1/tau.
double model_rate_epsilon(int n, double beta, int d, double tau, double tau1, double tau2);

// Computes the full schedule; throws ScheduleError (carrying the epsilon
// plug-in value) when epsilon >= 1, where sigma_n and m are undefined.
DrvsSchedule schedule(int n, double beta, int d, double tau, double tau1, double tau2, int p,
                      int d0);

// Hyperparameters of the DRVS conditional prior.
struct DrvsHyper {
  double dirichlet_a = 1.0;   // Dirichlet(a/m, ..., a/m)
  double restriction_b = 0.5; // weights restricted to alpha_j > b/m; needs b < 1
  double y_loc_rate = 1.0;    // a2 in exp(-a2 |mu|^{tau1})
  double y_loc_power = 1.0;   // tau1; 1 gives the Laplace-type default
  std::size_t rejection_budget = 100000;

  void validate() const;
};

// p(y | x, params); gates are normalized in log space so the result is
// strictly positive even when every x-kernel underflows.
double conditional_density(double y, const std::vector<double>& x, const MixtureParams& params);
double log_conditional_density(double y, const std::vector<double>& x,
                               const MixtureParams& params);

// alpha * sum_i log p(y_i | x_i, params) over the subset columns of x.
double fractional_log_likelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const ModelIndex& index, const MixtureParams& params,
                                 double alpha);

MixtureParams drvs_prior_sample(int m, int x_dim, double sigma, const DrvsHyper& hyper,
                                std::uint64_t seed);

// log prior density of params up to a constant (used by the posterior
// sampler); -inf outside the restricted region.
double drvs_log_prior(const MixtureParams& params, const DrvsHyper& hyper);

struct DrvsChain {
  std::vector<MixtureParams> draws;  // post burn-in, thinned
  double acceptance_rate = 0.0;
  std::size_t iterations = 0;
};

// Random-walk Metropolis within Gibbs targeting
// [prod_i p(y_i|x_i, theta)]^alpha * prior(theta) at fixed (m, sigma).
DrvsChain drvs_posterior_sampler(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                 const ModelIndex& index, int m, double sigma,
                                 const DrvsHyper& hyper, double alpha, std::size_t iters,
                                 std::uint64_t seed, std::size_t thin = 10);

struct DrvsModelPosteriorConfig {
  int m = 5;
  double sigma = 0.25;
  double alpha = 1.0;
  std::size_t n_draws = 20000;  // prior importance-sampling draws per model
  double ess_flag_threshold = 10.0;
};

// Per-model evidence by prior importance sampling (mean fractional
// likelihood over prior draws, log-sum-exp), combined with the subset prior
// weights. Models whose importance-weight effective sample size falls below
// the threshold carry an ess_flag in their entry.
ModelPosterior drvs_model_posterior(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int p,
                                    int d0, const DrvsHyper& hyper,
                                    const DrvsModelPosteriorConfig& cfg, std::uint64_t seed,
                                    std::size_t budget = (1u << 15));

}  // namespace fracbayes

#endif  // FRACBAYES_DENSITY_REGRESSION_HPP_
