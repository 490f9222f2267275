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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "fracbayes/harness.hpp"
#include "fracbayes/model_space.hpp"
#include "fracbayes/rng.hpp"

using namespace fracbayes;

TEST_CASE("gpvs prior weight examples") {
  // p = 2, d0 = 2: all four subsets share the same weight
  for (const ModelIndex& idx : enumerate_subsets(2, 2)) {
    CHECK(gpvs_prior_weight(idx, 2, 2) == doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK(gpvs_prior_normalizer(2, 2) == doctest::Approx(1.0).epsilon(1e-14));
  // the indicator zeroes out oversized subsets
  CHECK(gpvs_prior_weight(ModelIndex({1, 2, 3}, 5), 5, 2) == 0.0);
  // p = 10, |I| = 1
  CHECK(gpvs_prior_weight(ModelIndex({4}, 10), 10, 4) ==
        doctest::Approx(0.1 * std::pow(0.9, 9)).epsilon(1e-12));
}

TEST_CASE("normalized prior weight is nonincreasing in subset size") {
  for (int p : {2, 5, 9}) {
    for (int k = 0; k + 1 <= std::min(p, 4); ++k) {
      std::vector<int> small, big;
      for (int i = 1; i <= k; ++i) small.push_back(i);
      big = small;
      big.push_back(k + 1);
      CHECK(gpvs_prior_weight(ModelIndex(big, p), p, 4) <=
            gpvs_prior_weight(ModelIndex(small, p), p, 4) + 1e-15);
    }
  }
}

TEST_CASE("subset enumeration is canonical and complete") {
  std::vector<ModelIndex> subs = enumerate_subsets(4, 2);
  CHECK(subs.size() == 1 + 4 + 6);
  CHECK(subs.front().size() == 0);
  for (std::size_t i = 1; i < subs.size(); ++i) {
    CHECK(subs[i].size() >= subs[i - 1].size());
  }
}

TEST_CASE("enumeration with no data recovers the normalized prior") {
  RegressionData d;
  d.x.resize(0, 3);
  d.y.resize(0);
  GpConfig cfg;
  ModelPosterior post = enumerate_posterior(d, 3, 2, cfg, 1.0);
  double z = gpvs_prior_normalizer(3, 2);
  double total = 0.0;
  for (const auto& e : post.entries) {
    CHECK(e.probability ==
          doctest::Approx(gpvs_prior_weight(e.index, 3, 2) / z).epsilon(1e-10));
    total += e.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a single admissible model takes all the mass") {
  RegressionData d;
  d.x.resize(2, 1);
  d.x << 0.2, 0.8;
  d.y.resize(2);
  d.y << 0.5, -0.5;
  GpConfig cfg;
  ModelPosterior post = enumerate_posterior(d, 1, 0, cfg, 1.0);
  CHECK(post.entries.size() == 1);
  CHECK(post.entries[0].probability == doctest::Approx(1.0));
  CHECK(post.mode() == ModelIndex::empty(1));
}

TEST_CASE("enumeration budget overflow points to the sampler") {
  RegressionData d;
  d.x.resize(0, 60);
  d.y.resize(0);
  GpConfig cfg;
  bool advised_mcmc = false;
  try {
    (void)enumerate_posterior(d, 60, 3, cfg, 1.0);
  } catch (const std::runtime_error& ex) {
    advised_mcmc = std::string(ex.what()).find("mcmc") != std::string::npos;
  }
  CHECK(advised_mcmc);
}

TEST_CASE("posterior mode breaks ties toward the lexicographically smallest subset") {
  ModelPosterior post;
  ModelPosteriorEntry a, b, c;
  a.index = ModelIndex({2}, 3);
  a.probability = 0.4;
  b.index = ModelIndex({1}, 3);
  b.probability = 0.4;
  c.index = ModelIndex({1, 2}, 3);
  c.probability = 0.2;
  post.entries = {a, b, c};
  CHECK(post.mode() == ModelIndex({1}, 3));
  CHECK(selection_probability(post, ModelIndex({2}, 3)) == doctest::Approx(0.4));
  CHECK(selection_probability(post, ModelIndex({3}, 3)) == 0.0);
}

TEST_CASE("selection probability on point-mass and uniform posteriors") {
  ModelPosterior point;
  ModelPosteriorEntry e;
  e.index = ModelIndex({1, 3}, 4);
  e.probability = 1.0;
  point.entries = {e};
  CHECK(selection_probability(point, ModelIndex({1, 3}, 4)) == 1.0);

  ModelPosterior uniform;
  for (const ModelIndex& idx : enumerate_subsets(3, 1)) {
    ModelPosteriorEntry u;
    u.index = idx;
    u.probability = 0.25;
    uniform.entries.push_back(u);
  }
  CHECK(selection_probability(uniform, ModelIndex({2}, 3)) == doctest::Approx(0.25));
}

TEST_CASE("bayes factor is zero on identical models and antisymmetric") {
  RegressionData d;
  d.x.resize(6, 2);
  d.y.resize(6);
  Rng rng(3);
  for (int i = 0; i < 6; ++i) {
    d.x(i, 0) = rng.uniform();
    d.x(i, 1) = rng.uniform();
    d.y(i) = rng.normal();
  }
  GpConfig cfg;
  ModelIndex i1({1}, 2), i2({2}, 2);
  CHECK(bayes_factor(d, i1, i1, 2, cfg, 0.7) == 0.0);
  CHECK(bayes_factor(d, i1, i2, 2, cfg, 0.7) ==
        doctest::Approx(-bayes_factor(d, i2, i1, 2, cfg, 0.7)).epsilon(1e-12));
  CHECK_THROWS_AS((void)bayes_factor(d, ModelIndex({1, 2}, 2), i1, 1, cfg, 1.0),
                  std::invalid_argument);
}

TEST_CASE("alpha = 1 is exactly the regular posterior path") {
  // the fractional normalizing constant vanishes identically at alpha = 1
  for (int n : {1, 7, 123}) {
    CHECK(log_fractional_constant(1.0, n, 0.37) == 0.0);
  }
}

TEST_CASE("detailed balance of the add/delete/swap kernel on a three-model toy") {
  // p = 2, d0 = 1: support {none, {1}, {2}} with synthetic log weights
  const double logw[3] = {0.3, -0.4, 1.1};
  auto add_prob = [&](int from, int to) {
    // transition probability built from the documented proposal mechanics
    // states: 0 = none, 1 = {1}, 2 = {2}
    double q_fwd, q_rev;
    if (from == 0 && (to == 1 || to == 2)) {
      q_fwd = 0.4 / 2.0;  // add one of two covariates
      q_rev = 0.4 / 1.0;  // delete the single member
    } else if ((from == 1 || from == 2) && to == 0) {
      q_fwd = 0.4 / 1.0;
      q_rev = 0.4 / 2.0;
    } else if ((from == 1 && to == 2) || (from == 2 && to == 1)) {
      q_fwd = 0.2;  // swap the only member for the only outsider
      q_rev = 0.2;
    } else {
      return 0.0;
    }
    double acc = std::min(1.0, std::exp(logw[to] - logw[from]) * q_rev / q_fwd);
    return q_fwd * acc;
  };
  double pi[3];
  double z = 0.0;
  for (int i = 0; i < 3; ++i) z += std::exp(logw[i]);
  for (int i = 0; i < 3; ++i) pi[i] = std::exp(logw[i]) / z;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      CHECK(pi[i] * add_prob(i, j) == doctest::Approx(pi[j] * add_prob(j, i)).epsilon(1e-12));
    }
  }
}

namespace {

RegressionData sine_data(int n, int p, double noise, std::uint64_t seed) {
  RegressionTruth rt;
  rt.name = "sine1d";
  rt.support = {1};
  TruthSpec truth = rt.to_spec(p, 1.0);
  return generate_regression_data(truth, n, noise, seed);
}

}  // namespace

TEST_CASE("mcmc posterior converges to the enumerated posterior in total variation" *
          doctest::timeout(600)) {
  RegressionData d = sine_data(60, 4, 0.4, 77);
  GpConfig cfg;
  cfg.noise_sd = 0.4;
  cfg.bandwidth_grid = 32;
  ModelPosterior exact = enumerate_posterior(d, 4, 2, cfg, 1.0);
  ModelPosterior chain = mcmc_posterior(d, 4, 2, cfg, 1.0, 30000, 5);
  CHECK(total_variation(exact, chain) <= 0.05);
  CHECK(chain.estimator == PosteriorEstimator::kMcmc);
  CHECK(chain.iterations == 30000);
  CHECK(chain.acceptance_rate > 0.0);
  double total = 0.0;
  for (const auto& e : chain.entries) total += e.probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("total variation contracts as the iteration budget grows" * doctest::timeout(600)) {
  RegressionData d = sine_data(50, 3, 0.4, 78);
  GpConfig cfg;
  cfg.noise_sd = 0.4;
  cfg.bandwidth_grid = 32;
  ModelPosterior exact = enumerate_posterior(d, 3, 2, cfg, 1.0);
  double tv_prev = 1.0;
  bool shrank = true;
  for (std::size_t iters : {500u, 5000u, 50000u}) {
    double tv = total_variation(exact, mcmc_posterior(d, 3, 2, cfg, 1.0, iters, 9));
    if (tv > tv_prev + 0.02) shrank = false;
    tv_prev = tv;
  }
  CHECK(shrank);
  CHECK(tv_prev <= 0.05);
}

TEST_CASE("zero-information data leaves the chain on the prior" * doctest::timeout(600)) {
  // pure noise with a huge noise scale: every model explains the data
  // equally well and the posterior collapses to the subset prior
  Rng rng(11);
  RegressionData d;
  d.x.resize(40, 4);
  d.y.resize(40);
  for (int i = 0; i < 40; ++i) {
    for (int c = 0; c < 4; ++c) d.x(i, c) = rng.uniform();
    d.y(i) = 0.01 * rng.normal();
  }
  GpConfig cfg;
  cfg.noise_sd = 25.0;
  cfg.bandwidth_grid = 16;
  ModelPosterior chain = mcmc_posterior(d, 4, 2, cfg, 1.0, 60000, 21);
  ModelPosterior prior;
  double z = gpvs_prior_normalizer(4, 2);
  for (const ModelIndex& idx : enumerate_subsets(4, 2)) {
    ModelPosteriorEntry e;
    e.index = idx;
    e.probability = gpvs_prior_weight(idx, 4, 2) / z;
    prior.entries.push_back(e);
  }
  CHECK(total_variation(chain, prior) <= 0.05);
}

TEST_CASE("noiseless strong signal drives the mode to contain the truth") {
  RegressionData d = sine_data(120, 4, 0.0, 123);
  GpConfig cfg;
  cfg.noise_sd = 0.05;
  cfg.bandwidth_grid = 32;
  ModelPosterior post = enumerate_posterior(d, 4, 2, cfg, 1.0);
  CHECK(post.mode().contains(1));
}

TEST_CASE("anti-concentration endpoints: huge and zero radii") {
  GpConfig cfg;
  cfg.sup_norm_cap = 20.0;
  Rng rng(5);
  Eigen::MatrixXd design(64, 3);
  for (int i = 0; i < 64; ++i) {
    for (int c = 0; c < 3; ++c) design(i, c) = rng.uniform();
  }
  auto fstar = [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[0]); };
  ModelIndex idx({1}, 3);
  AntiConcentrationEstimate wide =
      anti_concentration_estimate(idx, cfg, 100, fstar, design, 1e6, 100, 3);
  CHECK(wide.probability == doctest::Approx(1.0));
  AntiConcentrationEstimate none =
      anti_concentration_estimate(idx, cfg, 100, fstar, design, 0.0, 100, 3);
  CHECK(none.probability == 0.0);
  CHECK(none.upper95 > 0.0);
  CHECK(none.upper95 < 0.1);
}

TEST_CASE("larger supersets concentrate less prior mass near the truth" *
          doctest::timeout(600)) {
  GpConfig cfg;
  cfg.sup_norm_cap = 20.0;
  Rng rng(6);
  Eigen::MatrixXd design(256, 3);
  for (int i = 0; i < 256; ++i) {
    for (int c = 0; c < 3; ++c) design(i, c) = rng.uniform();
  }
  auto fstar = [](const std::vector<double>& x) { return std::sin(2.0 * M_PI * x[0]); };
  const double radius = 1.05;
  AntiConcentrationEstimate small_model =
      anti_concentration_estimate(ModelIndex({1}, 3), cfg, 200, fstar, design, radius, 400, 7);
  AntiConcentrationEstimate big_model = anti_concentration_estimate(
      ModelIndex({1, 2, 3}, 3), cfg, 200, fstar, design, radius, 400, 7);
  CHECK(big_model.probability < small_model.probability);
}
