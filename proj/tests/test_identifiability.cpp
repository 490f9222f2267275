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

#include "fracbayes/harness.hpp"
#include "fracbayes/identifiability.hpp"

using namespace fracbayes;

namespace {

TruthSpec named_truth(const std::string& name, int p, std::vector<int> support) {
  RegressionTruth rt;
  rt.name = name;
  rt.support = std::move(support);
  return rt.to_spec(p, 1.0);
}

}  // namespace

TEST_CASE("delta basis: constant truth has no gap") {
  RegressionTruth rt;
  rt.name = "constant";
  rt.constant_value = 1.3;
  TruthSpec truth = rt.to_spec(2, 1.0);
  // a constant depends on no covariate; declare one anyway to probe the sums
  truth.support = ModelIndex({1}, 2);
  DeltaBasisResult r = delta_basis(truth, 16);
  CHECK(r.delta_sq <= 1e-12);
  CHECK(r.parseval_tail <= 1e-10);
}

TEST_CASE("delta basis: a single basis mode carries unit mass") {
  TruthSpec truth = named_truth("single_cosine_mode", 3, {2});
  DeltaBasisResult r = delta_basis(truth, 16);
  CHECK(r.delta_sq == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r.parseval_tail <= 1e-10);
}

TEST_CASE("delta basis: additive sine truth has gap one half") {
  TruthSpec truth = named_truth("additive_sine", 2, {1, 2});
  DeltaBasisResult r = delta_basis(truth, 32);
  CHECK(r.per_coordinate_sq.size() == 2);
  CHECK(r.per_coordinate_sq[0] == doctest::Approx(0.5).epsilon(2e-5));
  CHECK(r.per_coordinate_sq[1] == doctest::Approx(0.5).epsilon(2e-5));
  CHECK(r.delta_sq == doctest::Approx(0.5).epsilon(2e-5));
  CHECK(r.delta == doctest::Approx(std::sqrt(0.5)).epsilon(2e-5));
  CHECK(r.parseval_tail <= 1e-4);
}

TEST_CASE("delta mc agrees with the analytic conditional variances") {
  TruthSpec constant = named_truth("constant", 2, {});
  constant.support = ModelIndex({1}, 2);
  DeltaMcResult rc = delta_mc(constant, 2000, 128, 4);
  CHECK(std::fabs(rc.delta_sq) <= 3.0 * rc.se + 1e-9);

  TruthSpec truth = named_truth("additive_sine", 2, {1, 2});
  DeltaMcResult r = delta_mc(truth, 4000, 256, 5);
  CHECK(std::fabs(r.delta_sq - 0.5) <= 3.0 * r.se);
  CHECK_THROWS_AS((void)delta_mc(truth, 50, 128, 5), std::invalid_argument);
}

TEST_CASE("delta basis and delta mc cross-validate on the acceptance truths") {
  for (auto& [name, support] : std::vector<std::pair<std::string, std::vector<int>>>{
           {"single_cosine_mode", {1}}, {"additive_sine", {1, 2}}}) {
    TruthSpec truth = named_truth(name, 2, support);
    DeltaBasisResult basis = delta_basis(truth, 32);
    DeltaMcResult mc = delta_mc(truth, 4000, 256, 6);
    CHECK(std::fabs(basis.delta_sq - mc.delta_sq) <= 3.0 * mc.se + basis.parseval_tail + 1e-6);
  }
}

TEST_CASE("kl ball membership: trivial, boundary and hand-computed cases") {
  std::vector<double> star(10, 0.0);
  CHECK(kl_ball_member(star, star, 1.0, 0.001));
  // boundary: D = n eps^2 exactly is inside the closed ball; build a gap
  // with V = n eps^2 exactly, which binds first
  const double eps = 0.3;
  std::vector<double> gap(10, eps);  // V = 10 eps^2 / 1 = n eps^2 exactly
  CHECK(kl_ball_member(gap, star, 1.0, eps));
  // any larger gap leaves the ball
  std::vector<double> bigger(10, eps * 1.0001);
  CHECK(!kl_ball_member(bigger, star, 1.0, eps));
  // constant gap g is a member iff g^2 <= eps^2 (V binds before D)
  for (double g : {0.1, 0.2, 0.5}) {
    std::vector<double> f(10, g);
    CHECK(kl_ball_member(f, star, 1.0, 0.25) == (g * g <= 0.25 * 0.25 + 1e-15));
  }
  std::vector<double> wrong(9, 0.0);
  CHECK_THROWS_AS((void)kl_ball_member(wrong, star, 1.0, 0.1), std::invalid_argument);
}

namespace {

PriorFunctionSampler gaussian_location_sampler(int n, double prior_sd) {
  return [n, prior_sd](Rng& rng) {
    return std::vector<double>(static_cast<std::size_t>(n), prior_sd * rng.normal());
  };
}

// closed-form ball mass of the Gaussian location model: the V constraint
// binds, so mass(eps) = P(|theta| <= eps) = erf(eps / sqrt 2) for a standard
// normal prior
double oracle_mass(double eps) { return std::erf(eps / std::sqrt(2.0)); }

}  // namespace

TEST_CASE("local complexity: huge radius gives full mass and zero complexity") {
  const int n = 50;
  std::vector<double> star(n, 0.0);
  ComplexityEstimate est =
      local_complexity(gaussian_location_sampler(n, 1.0), star, 1.0, 50.0, 5000, 3);
  CHECK(est.mass == doctest::Approx(1.0));
  CHECK(est.complexity == doctest::Approx(0.0));
  CHECK(!est.censored);
}

TEST_CASE("local complexity matches the closed-form Gaussian ball mass") {
  const int n = 100;
  std::vector<double> star(n, 0.0);
  ComplexityProfile profile(gaussian_location_sampler(n, 1.0), star, 1.0, 200000, 4);
  for (double eps : {0.05, 0.1, 0.3, 1.0}) {
    ComplexityEstimate est = profile.at(eps);
    double p = oracle_mass(eps);
    double se = std::sqrt(p * (1.0 - p) / 200000.0);
    CHECK(std::fabs(est.mass - p) <= 3.0 * se + 1e-12);
  }
}

TEST_CASE("mass is exactly monotone in eps under common random numbers") {
  const int n = 40;
  std::vector<double> star(n, 0.0);
  ComplexityProfile profile(gaussian_location_sampler(n, 1.0), star, 1.0, 20000, 5);
  double prev_mass = -1.0, prev_cx = 1e18;
  for (double eps = 0.01; eps < 2.0; eps *= 1.4) {
    ComplexityEstimate est = profile.at(eps);
    CHECK(est.mass >= prev_mass);
    CHECK(est.complexity <= prev_cx + 1e-15);
    prev_mass = est.mass;
    prev_cx = est.complexity;
  }
}

TEST_CASE("censoring flags a mass estimate at the floor") {
  const int n = 30;
  std::vector<double> star(n, 0.0);
  ComplexityEstimate est =
      local_complexity(gaussian_location_sampler(n, 1.0), star, 1.0, 1e-9, 2000, 6);
  CHECK(est.censored);
  CHECK(est.complexity == doctest::Approx(-std::log(1.0 / 2000.0) / n).epsilon(1e-12));
}

TEST_CASE("critical radius: point-mass prior returns the floor") {
  const int n = 50;
  std::vector<double> star(n, 0.4);
  PriorFunctionSampler point = [n](Rng&) {
    return std::vector<double>(static_cast<std::size_t>(n), 0.4);
  };
  CHECK(critical_radius(point, star, 1.0, 0.5, 2000, 7, 1e-4, 5.0) == doctest::Approx(1e-4));
}

TEST_CASE("critical radius brackets must change sign") {
  const int n = 50;
  std::vector<double> star(n, 0.0);
  // a bracket entirely on one side of the crossing
  CHECK_THROWS_AS((void)critical_radius(gaussian_location_sampler(n, 1.0), star, 1.0, 0.5, 5000,
                                        8, 2.0, 9.0),
                  std::runtime_error);
}

TEST_CASE("critical radius tracks the closed-form crossing at n = 1000") {
  const int n = 1000;
  std::vector<double> star(n, 0.0);
  const double alpha = 0.5;
  double est = critical_radius(gaussian_location_sampler(n, 1.0), star, 1.0, alpha, 200000, 9,
                               1e-3, 2.0);
  // oracle crossing of -log erf(eps/sqrt 2) = alpha n eps^2
  double lo = 1e-4, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double g = -std::log(oracle_mass(mid)) / n - alpha * mid * mid;
    (g > 0.0 ? lo : hi) = mid;
  }
  double oracle = 0.5 * (lo + hi);
  CHECK(std::fabs(est - oracle) <= 0.1 * oracle);
}

TEST_CASE("critical radius is nonincreasing when alpha doubles") {
  const int n = 400;
  std::vector<double> star(n, 0.0);
  double r1 = critical_radius(gaussian_location_sampler(n, 1.0), star, 1.0, 0.3, 100000, 10,
                              1e-3, 2.0);
  double r2 = critical_radius(gaussian_location_sampler(n, 1.0), star, 1.0, 0.6, 100000, 10,
                              1e-3, 2.0);
  CHECK(r2 <= r1 + 2e-3);
}

TEST_CASE("truth spec validation probes the sup norm") {
  TruthSpec bad;
  bad.p = 1;
  bad.f = [](const std::vector<double>& x) { return 100.0 * x[0]; };
  bad.support = ModelIndex({1}, 1);
  CHECK_THROWS_AS(bad.validate(10.0, 1000), std::invalid_argument);
  TruthSpec ok = named_truth("sine1d", 2, {1});
  CHECK_NOTHROW(ok.validate());
}

TEST_CASE("fitted wrong-model error is no smaller than the identifiability gap" *
          doctest::timeout(600)) {
  // additive sine truth, model missing covariate 2: the L2 error of the
  // fitted predictive mean cannot undercut delta
  TruthSpec truth = named_truth("additive_sine", 2, {1, 2});
  RegressionData data = generate_regression_data(truth, 300, 0.3, 99);
  GpConfig cfg;
  cfg.noise_sd = 0.3;
  ModelIndex wrong({1}, 2);
  Eigen::MatrixXd test_full(2000, 2);
  Rng rng(100);
  for (int i = 0; i < 2000; ++i) {
    test_full(i, 0) = rng.uniform();
    test_full(i, 1) = rng.uniform();
  }
  Eigen::MatrixXd test_sub = test_full.col(0);
  std::vector<double> pred = posterior_predictive_mean(data, wrong, 4.0, cfg, 1.0, test_sub);
  double err = 0.0;
  std::vector<double> row(2);
  for (int i = 0; i < 2000; ++i) {
    row[0] = test_full(i, 0);
    row[1] = test_full(i, 1);
    double d = pred[i] - truth.f(row);
    err += d * d;
  }
  err = std::sqrt(err / 2000.0);
  double delta = std::sqrt(0.5);
  CHECK(err >= delta - 0.1);
}
