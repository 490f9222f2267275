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

#ifndef FRACBAYES_MODEL_SPACE_HPP_
#define FRACBAYES_MODEL_SPACE_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "fracbayes/gp_model.hpp"
#include "fracbayes/model_index.hpp"

namespace fracbayes {

// Unnormalized subset prior weight p^{-|I|} (1 - p^{-1})^{p-|I|} 1(|I| <= d0).
// Out-of-range subsets get weight 0, never an error.
double gpvs_prior_weight(const ModelIndex& index, int p, int d0);
double gpvs_prior_normalizer(int p, int d0);

struct ModelPosteriorEntry {
  ModelIndex index;
  double log_marginal = 0.0;   // parameter prior only (Bayes-factor scale)
  double log_prior = 0.0;      // log unnormalized subset weight
  double probability = 0.0;
  double mc_se_log = 0.0;      // per-model evidence se (Monte Carlo backends)
  double ess = 0.0;            // importance-sampling diagnostics, if any
  bool ess_flag = false;
};

enum class PosteriorEstimator { kExact, kMcmc };

struct ModelPosterior {
  std::vector<ModelPosteriorEntry> entries;  // canonical subset order
  double alpha = 1.0;
  PosteriorEstimator estimator = PosteriorEstimator::kExact;
  // MCMC diagnostics
  std::size_t iterations = 0;
  double acceptance_rate = 0.0;

  const ModelPosteriorEntry& at(const ModelIndex& index) const;
  double probability_of(const ModelIndex& index) const;
  // Posterior mode; ties break to the lexicographically smallest subset.
  ModelIndex mode() const;
};

// Exhaustive posterior over all subsets with |I| <= d0. Throws when the
// support size exceeds the enumeration budget, pointing callers at the MCMC
// backend instead.
ModelPosterior enumerate_posterior(const RegressionData& data, int p, int d0, const GpConfig& cfg,
                                   double alpha, std::size_t budget = (1u << 15));

// Memoizing evidence cache shared between the enumeration and MCMC backends.
class EvidenceCache {
 public:
  EvidenceCache(const RegressionData& data, const GpConfig& cfg, double alpha);
  double log_marginal(const ModelIndex& index);
  std::size_t size() const { return cache_.size(); }

 private:
  const RegressionData& data_;
  GpConfig cfg_;
  double alpha_;
  std::map<std::vector<int>, double> cache_;
};

// Metropolis-Hastings over subsets with add 0.4 / delete 0.4 / swap 0.2
// proposals; infeasible proposals at the support boundary leave the chain in
// place. Visit frequencies are collected after a 20% burn-in.
ModelPosterior mcmc_posterior(const RegressionData& data, int p, int d0, const GpConfig& cfg,
                              double alpha, std::size_t iters, std::uint64_t seed);

// log BF_alpha(M_I1; M_I2): difference of parameter-prior marginals only.
double bayes_factor(const RegressionData& data, const ModelIndex& i1, const ModelIndex& i2,
                    int d0, const GpConfig& cfg, double alpha);

// Pi_alpha(I = I_star | data).
double selection_probability(const ModelPosterior& post, const ModelIndex& i_star);

// Total variation distance between two posteriors over the same support.
double total_variation(const ModelPosterior& a, const ModelPosterior& b);

struct AntiConcentrationEstimate {
  double probability = 0.0;
  double se = 0.0;
  // one-sided 95% upper bound, informative when no draw landed in the ball
  double upper95 = 0.0;
  std::size_t hits = 0;
  std::size_t draws = 0;
};

// Monte Carlo estimate of Pi_I(d_n(f, f_star) <= radius) where d_n is the
// empirical L2 distance on a fixed design sample of `design_points` rows and
// the prior draws use gp_prior_sample with bandwidth from its truncated
// prior at sample size n.
AntiConcentrationEstimate anti_concentration_estimate(
    const ModelIndex& index, const GpConfig& cfg, int n,
    const std::function<double(const std::vector<double>&)>& f_star_at_row,
    const Eigen::MatrixXd& design_points, double radius, std::size_t n_mc, std::uint64_t seed);

}  // namespace fracbayes

#endif  // FRACBAYES_MODEL_SPACE_HPP_
