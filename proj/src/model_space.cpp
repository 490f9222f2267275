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

#include "fracbayes/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fracbayes/rng.hpp"
#include "fracbayes/special.hpp"

namespace fracbayes {

namespace {

constexpr double kAddProb = 0.4;
constexpr double kDeleteProb = 0.4;
constexpr double kSwapProb = 0.2;

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v *= static_cast<double>(n - k + i) / i;
  return v;
}

std::size_t support_size(int p, int d0) {
  double s = 0.0;
  for (int k = 0; k <= std::min(p, d0); ++k) s += binomial(p, k);
  return static_cast<std::size_t>(s + 0.5);
}

double log_evidence_for(EvidenceCache& cache, const ModelIndex& index) {
  return cache.log_marginal(index);
}

}  // namespace

double gpvs_prior_weight(const ModelIndex& index, int p, int d0) {
  if (p < 1) throw std::invalid_argument("gpvs_prior_weight: p must be positive");
  if (d0 < 0) throw std::invalid_argument("gpvs_prior_weight: d0 must be nonnegative");
  int k = index.size();
  if (k > d0) return 0.0;
  return std::pow(static_cast<double>(p), -k) *
         std::pow(1.0 - 1.0 / static_cast<double>(p), p - k);
}

double gpvs_prior_normalizer(int p, int d0) {
  double z = 0.0;
  for (int k = 0; k <= std::min(p, d0); ++k) {
    z += binomial(p, k) * std::pow(static_cast<double>(p), -k) *
         std::pow(1.0 - 1.0 / static_cast<double>(p), p - k);
  }
  return z;
}

const ModelPosteriorEntry& ModelPosterior::at(const ModelIndex& index) const {
  for (const auto& e : entries) {
    if (e.index == index) return e;
  }
  throw std::out_of_range("ModelPosterior: subset " + index.to_string() + " not in support");
}

double ModelPosterior::probability_of(const ModelIndex& index) const {
  for (const auto& e : entries) {
    if (e.index == index) return e.probability;
  }
  return 0.0;
}

ModelIndex ModelPosterior::mode() const {
  if (entries.empty()) throw std::runtime_error("ModelPosterior: empty support");
  const ModelPosteriorEntry* best = &entries.front();
  for (const auto& e : entries) {
    if (e.probability > best->probability ||
        (e.probability == best->probability && e.index < best->index)) {
      best = &e;
    }
  }
  return best->index;
}

EvidenceCache::EvidenceCache(const RegressionData& data, const GpConfig& cfg, double alpha)
    : data_(data), cfg_(cfg), alpha_(alpha) {}

double EvidenceCache::log_marginal(const ModelIndex& index) {
  auto it = cache_.find(index.indices());
  if (it != cache_.end()) return it->second;
  double v;
  if (index.size() == 0) {
    v = log_fractional_marginal(data_, index, 1.0, cfg_, alpha_);
  } else if (data_.n() == 0) {
    v = 0.0;
  } else {
    v = integrate_bandwidth(data_, index, cfg_, alpha_);
  }
  cache_.emplace(index.indices(), v);
  return v;
}

ModelPosterior enumerate_posterior(const RegressionData& data, int p, int d0, const GpConfig& cfg,
                                   double alpha, std::size_t budget) {
  if (support_size(p, d0) > budget) {
    throw std::runtime_error(
        "enumerate_posterior: admissible support exceeds the enumeration budget; use "
        "mcmc_posterior instead");
  }
  EvidenceCache cache(data, cfg, alpha);
  ModelPosterior post;
  post.alpha = alpha;
  post.estimator = PosteriorEstimator::kExact;
  std::vector<double> log_weights;
  for (const ModelIndex& index : enumerate_subsets(p, d0)) {
    ModelPosteriorEntry e;
    e.index = index;
    e.log_prior = std::log(gpvs_prior_weight(index, p, d0));
    e.log_marginal = log_evidence_for(cache, index);
    log_weights.push_back(e.log_prior + e.log_marginal);
    post.entries.push_back(std::move(e));
  }
  double lz = log_sum_exp(log_weights);
  if (!std::isfinite(lz)) {
    // a one-point support normalizes to certainty even when the prior
    // formula degenerates (p = 1 zeroes the empty-set factor)
    if (post.entries.size() == 1) {
      post.entries[0].probability = 1.0;
      return post;
    }
    throw std::runtime_error("enumerate_posterior: every admissible model has zero weight");
  }
  for (std::size_t i = 0; i < post.entries.size(); ++i) {
    post.entries[i].probability = std::exp(log_weights[i] - lz);
  }
  return post;
}

ModelPosterior mcmc_posterior(const RegressionData& data, int p, int d0, const GpConfig& cfg,
                              double alpha, std::size_t iters, std::uint64_t seed) {
  if (iters < 1) throw std::invalid_argument("mcmc_posterior: iters must be positive");
  EvidenceCache cache(data, cfg, alpha);
  auto log_target = [&](const ModelIndex& index) {
    double w = gpvs_prior_weight(index, p, d0);
    if (w <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(w) + log_evidence_for(cache, index);
  };

  Rng rng(seed);
  ModelIndex state = ModelIndex::empty(p);
  double state_lt = log_target(state);
  std::map<std::vector<int>, std::size_t> counts;
  const std::size_t burn = iters / 5;
  std::size_t accepted = 0, proposed = 0;

  for (std::size_t it = 0; it < iters; ++it) {
    double u = rng.uniform();
    ModelIndex cand = state;
    double log_q_fwd = 0.0, log_q_rev = 0.0;
    bool have_candidate = false;
    const int k = state.size();
    if (u < kAddProb) {
      if (k < p) {
        int pick = static_cast<int>(rng.uniform_index(p - k));
        int j = 0;
        for (int c = 1; c <= p; ++c) {
          if (!state.contains(c) && pick-- == 0) {
            j = c;
            break;
          }
        }
        cand = state.with(j);
        log_q_fwd = std::log(kAddProb / (p - k));
        log_q_rev = std::log(kDeleteProb / (k + 1));
        have_candidate = true;
      }
    } else if (u < kAddProb + kDeleteProb) {
      if (k > 0) {
        int j = state.indices()[rng.uniform_index(k)];
        cand = state.without(j);
        log_q_fwd = std::log(kDeleteProb / k);
        log_q_rev = std::log(kAddProb / (p - k + 1));
        have_candidate = true;
      }
    } else {
      if (k > 0 && k < p) {
        int out = state.indices()[rng.uniform_index(k)];
        int pick = static_cast<int>(rng.uniform_index(p - k));
        int in = 0;
        for (int c = 1; c <= p; ++c) {
          if (!state.contains(c) && pick-- == 0) {
            in = c;
            break;
          }
        }
        cand = state.swapped(out, in);
        // |I'| = |I|, so the swap proposal density is symmetric
        log_q_fwd = 0.0;
        log_q_rev = 0.0;
        have_candidate = true;
      }
    }
    if (have_candidate) {
      ++proposed;
      double cand_lt = log_target(cand);
      double log_acc = cand_lt - state_lt + log_q_rev - log_q_fwd;
      if (std::isfinite(cand_lt) && std::log(rng.uniform_pos()) <= log_acc) {
        state = cand;
        state_lt = cand_lt;
        ++accepted;
      }
    }
    if (it >= burn) ++counts[state.indices()];
  }

  ModelPosterior post;
  post.alpha = alpha;
  post.estimator = PosteriorEstimator::kMcmc;
  post.iterations = iters;
  post.acceptance_rate = proposed ? static_cast<double>(accepted) / proposed : 0.0;
  const double total = static_cast<double>(iters - burn);
  for (const auto& [indices, count] : counts) {
    ModelPosteriorEntry e;
    e.index = ModelIndex(indices, p);
    e.log_prior = std::log(gpvs_prior_weight(e.index, p, d0));
    e.log_marginal = log_evidence_for(cache, e.index);
    e.probability = static_cast<double>(count) / total;
    post.entries.push_back(std::move(e));
  }
  std::sort(post.entries.begin(), post.entries.end(),
            [](const auto& a, const auto& b) { return a.index < b.index; });
  return post;
}

double bayes_factor(const RegressionData& data, const ModelIndex& i1, const ModelIndex& i2,
                    int d0, const GpConfig& cfg, double alpha) {
  if (i1.size() > d0 || i2.size() > d0) {
    throw std::invalid_argument("bayes_factor: both models must be admissible (|I| <= d0)");
  }
  EvidenceCache cache(data, cfg, alpha);
  return cache.log_marginal(i1) - cache.log_marginal(i2);
}

double selection_probability(const ModelPosterior& post, const ModelIndex& i_star) {
  return post.probability_of(i_star);
}

double total_variation(const ModelPosterior& a, const ModelPosterior& b) {
  std::map<std::vector<int>, double> pa, pb;
  for (const auto& e : a.entries) pa[e.index.indices()] = e.probability;
  for (const auto& e : b.entries) pb[e.index.indices()] = e.probability;
  double tv = 0.0;
  for (const auto& [k, v] : pa) tv += std::fabs(v - (pb.count(k) ? pb[k] : 0.0));
  for (const auto& [k, v] : pb) {
    if (!pa.count(k)) tv += v;
  }
  return 0.5 * tv;
}

AntiConcentrationEstimate anti_concentration_estimate(
    const ModelIndex& index, const GpConfig& cfg, int n,
    const std::function<double(const std::vector<double>&)>& f_star_at_row,
    const Eigen::MatrixXd& design_points, double radius, std::size_t n_mc, std::uint64_t seed) {
  if (radius < 0.0) throw std::invalid_argument("anti_concentration: radius must be nonnegative");
  const int rows = static_cast<int>(design_points.rows());
  Eigen::MatrixXd sub(rows, index.size());
  for (int c = 0; c < index.size(); ++c) sub.col(c) = design_points.col(index.indices()[c] - 1);
  std::vector<double> fstar(rows);
  for (int r = 0; r < rows; ++r) {
    std::vector<double> row(design_points.cols());
    for (int c = 0; c < design_points.cols(); ++c) row[c] = design_points(r, c);
    fstar[r] = f_star_at_row(row);
  }
  Rng rng(seed);
  std::size_t hits = 0;
  for (std::size_t i = 0; i < n_mc; ++i) {
    double a = sample_bandwidth(cfg, n, std::max(index.size(), 1), rng.next_u64());
    std::vector<double> draw;
    try {
      draw = gp_prior_sample(index, a, sub, cfg, rng.next_u64());
    } catch (const std::runtime_error&) {
      continue;  // sup-norm rejection exhausted counts as a miss
    }
    double s = 0.0;
    for (int r = 0; r < rows; ++r) {
      double d = draw[r] - fstar[r];
      s += d * d;
    }
    double dist = std::sqrt(s / rows);
    if (dist <= radius) ++hits;
  }
  AntiConcentrationEstimate out;
  out.hits = hits;
  out.draws = n_mc;
  double phat = static_cast<double>(hits) / static_cast<double>(n_mc);
  out.probability = phat;
  out.se = std::sqrt(std::max(0.0, phat * (1.0 - phat)) / static_cast<double>(n_mc));
  // exact one-sided 95% bound when nothing landed inside; Wald otherwise
  out.upper95 = (hits == 0) ? 1.0 - std::pow(0.05, 1.0 / static_cast<double>(n_mc))
                            : std::min(1.0, phat + 1.6448536269514722 * out.se);
  return out;
}

}  // namespace fracbayes
