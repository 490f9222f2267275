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

#ifndef FRACBAYES_GP_MODEL_HPP_
#define FRACBAYES_GP_MODEL_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fracbayes/model_index.hpp"

namespace fracbayes {

// Configuration of the per-model Gaussian-process regression prior:
// squared-exponential kernel exp(-a^2 ||x - x'||^2) on the coordinates of the
// model subset, with the inverse bandwidth A drawn from A^d ~ Gamma(a1, a2)
// (shape/scale) conditioned on A >= n^{1/(2 beta + d)}.
struct GpConfig {
  double noise_sd = 0.5;          // known sigma
  double bandwidth_shape = 1.0;   // a1
  double bandwidth_scale = 1.0;   // a2
  double smoothness = 1.0;        // beta, sets the bandwidth floor exponent
  double sup_norm_cap = 10.0;     // A_inf, enforced by rejection in sampling
  int bandwidth_grid = 64;        // log-spaced quadrature nodes
  double bandwidth_max_factor = 4.0;  // a_max = factor * n

  void validate() const;
};

struct RegressionData {
  Eigen::MatrixXd x;  // n x p, entries in [0,1]
  Eigen::VectorXd y;  // n

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(x.cols()); }
  void validate() const;
};

// log of the normalizing factor relating the alpha-fractional Gaussian
// likelihood to an exact Gaussian likelihood with inflated noise:
// [prod_i N(y_i; f_i, sigma^2)]^alpha
//   = c(alpha,n,sigma) * prod_i N(y_i; f_i, sigma^2/alpha).
double log_fractional_constant(double alpha, int n, double sigma);

// log int [prod_i N(y_i; f(x_{i,I}), sigma^2)]^alpha dGP_a(f). The empty
// subset denotes the zero-function model f == 0.
double log_fractional_marginal(const RegressionData& data, const ModelIndex& index, double a,
                               const GpConfig& cfg, double alpha);

// log of the bandwidth-integrated fractional marginal over the truncated
// Gamma-type prior on A, using trapezoid-in-log-a with log-sum-exp. Requires
// a nonempty subset.
double integrate_bandwidth(const RegressionData& data, const ModelIndex& index,
                           const GpConfig& cfg, double alpha);

// Lower truncation point of the bandwidth prior for a d-dimensional subset.
double bandwidth_floor(const GpConfig& cfg, int n, int d);

// Draw the inverse bandwidth A from its truncated prior; uses inverse-CDF
// sampling because the truncation region can carry vanishing Gamma mass.
double sample_bandwidth(const GpConfig& cfg, int n, int d, std::uint64_t seed);

// Draw GP values at the given points (rows of `points`), rejecting draws with
// sup-norm above cfg.sup_norm_cap; throws once the retry budget is exhausted.
std::vector<double> gp_prior_sample(const ModelIndex& index, double a,
                                    const Eigen::MatrixXd& points, const GpConfig& cfg,
                                    std::uint64_t seed, int max_retries = 1000);

// Posterior predictive mean k_*^T (K + (sigma^2/alpha) I)^{-1} y at the given
// test points, for a fixed bandwidth.
std::vector<double> posterior_predictive_mean(const RegressionData& data, const ModelIndex& index,
                                              double a, const GpConfig& cfg, double alpha,
                                              const Eigen::MatrixXd& test_points);

}  // namespace fracbayes

#endif  // FRACBAYES_GP_MODEL_HPP_
