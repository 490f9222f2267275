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

#ifndef FRACBAYES_IDENTIFIABILITY_HPP_
#define FRACBAYES_IDENTIFIABILITY_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracbayes/model_index.hpp"
#include "fracbayes/rng.hpp"

namespace fracbayes {

// The data-generating truth: an evaluable regression function of the
// covariates in the true support, under the product-uniform design on
// [0,1]^p.
struct TruthSpec {
  std::function<double(const std::vector<double>&)> f;  // takes the full p-vector
  ModelIndex support;   // I*
  int p = 1;
  double smoothness = 1.0;  // declared beta
  std::string name;

  // sup over a probe grid must stay below the declared cap
  void validate(double sup_cap = 10.0, std::size_t probe = 10000) const;
};

struct DeltaBasisResult {
  double delta = 0.0;          // the gap (square root of the min)
  double delta_sq = 0.0;       // min_j sum_{v: v_j != 0} <f, e_v>^2
  std::vector<double> per_coordinate_sq;  // per j in I*
  double parseval_tail = 0.0;  // ||f||^2 minus captured coefficient mass
};

// Identifiability gap from tensor cosine-basis coefficients (e_0 = 1,
// e_k(x) = sqrt(2) cos(k pi x)), coefficients by tensor Gauss-Legendre
// quadrature, truncated at `trunc` modes per coordinate.
DeltaBasisResult delta_basis(const TruthSpec& truth, int trunc = 32, int quad_nodes = 256);

struct DeltaMcResult {
  double delta = 0.0;
  double delta_sq = 0.0;
  double se = 0.0;  // se of the minimizing coordinate's conditional variance
  std::vector<double> per_coordinate_sq;
  std::vector<double> per_coordinate_se;
};

// Nested Monte Carlo of min_j E[Var[f(X_{I*}) | X_{I* minus j}]], with the
// inner sample variance unbiased by the ((n_inner - 1)) divisor.
DeltaMcResult delta_mc(const TruthSpec& truth, std::size_t n_outer, std::size_t n_inner,
                       std::uint64_t seed);

// Membership of f in the epsilon-KL neighborhood of f* for fixed-design
// Gaussian regression: D = sum (f*-f)^2 / (2 sigma^2) and V = sum (f*-f)^2 /
// sigma^2 at the design points; member iff D <= n eps^2 and V <= n eps^2
// (closed ball: boundary counts as inside).
bool kl_ball_member(const std::vector<double>& theta_vals,
                    const std::vector<double>& theta_star_vals, double sigma, double eps);

struct ComplexityEstimate {
  double eps = 0.0;
  int n = 0;
  double mass = 0.0;        // prior mass of the KL ball
  double mass_se = 0.0;     // binomial se
  double complexity = 0.0;  // -(1/n) log max(mass, floor)
  std::size_t draws = 0;
  bool censored = false;    // mass estimate hit the 1/n_mc floor
};

// A prior draw is the vector of the parameter's regression-function values
// at the n design points.
using PriorFunctionSampler = std::function<std::vector<double>(Rng&)>;

// Frozen buffer of prior draws shared across an epsilon grid, making the
// monotonicity of the mass estimate in epsilon exact rather than
// statistical.
class ComplexityProfile {
 public:
  ComplexityProfile(const PriorFunctionSampler& sampler,
                    const std::vector<double>& theta_star_vals, double sigma, std::size_t n_mc,
                    std::uint64_t seed);

  ComplexityEstimate at(double eps) const;
  std::vector<ComplexityEstimate> on_grid(const std::vector<double>& eps_grid) const;

 private:
  std::vector<double> max_eps_;  // per draw: the smallest eps admitting it
  std::vector<double> theta_star_;
  double sigma_;
  int n_;
};

ComplexityEstimate local_complexity(const PriorFunctionSampler& sampler,
                                    const std::vector<double>& theta_star_vals, double sigma,
                                    double eps, std::size_t n_mc, std::uint64_t seed);

// Smallest epsilon solving complexity(eps) = alpha eps^2, located by
// bisection on the monotone surrogate g(eps) = complexity(eps) - alpha eps^2
// over a frozen draw buffer; absolute tolerance 1e-3 in eps. When the
// complexity already vanishes at the lower endpoint the floor itself is
// returned.
double critical_radius(const PriorFunctionSampler& sampler,
                       const std::vector<double>& theta_star_vals, double sigma, double alpha,
                       std::size_t n_mc, std::uint64_t seed, double eps_lo = 1e-4,
                       double eps_hi = 10.0);

}  // namespace fracbayes

#endif  // FRACBAYES_IDENTIFIABILITY_HPP_
