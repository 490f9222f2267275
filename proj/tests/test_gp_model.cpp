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

#include "fracbayes/gp_model.hpp"
#include "fracbayes/quadrature.hpp"
#include "fracbayes/rng.hpp"

using namespace fracbayes;

namespace {

RegressionData two_point_data() {
  RegressionData d;
  d.x.resize(2, 1);
  d.x << 0.2, 0.7;
  d.y.resize(2);
  d.y << 0.4, -0.3;
  return d;
}

double log_normal_pdf(double y, double mu, double s2) {
  return -0.5 * (y - mu) * (y - mu) / s2 - 0.5 * std::log(2.0 * M_PI * s2);
}

}  // namespace

TEST_CASE("empty model is the zero-function Gaussian likelihood") {
  RegressionData d;
  d.x.resize(1, 1);
  d.x << 0.5;
  d.y.resize(1);
  d.y << 0.9;
  GpConfig cfg;
  cfg.noise_sd = 0.7;
  double lm = log_fractional_marginal(d, ModelIndex::empty(1), 1.0, cfg, 1.0);
  CHECK(lm == doctest::Approx(log_normal_pdf(0.9, 0.0, 0.49)).epsilon(1e-12));
}

TEST_CASE("two-point marginal matches dense 2-d quadrature of the GP integral") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  cfg.noise_sd = 0.5;
  const double a = 1.8;
  ModelIndex idx({1}, 1);
  double lm = log_fractional_marginal(d, idx, a, cfg, 1.0);

  // oracle: integrate N(y; f, sigma^2 I) over f ~ N(0, K) with nested
  // adaptive panels over a wide box
  double k12 = std::exp(-a * a * 0.25);  // |0.2-0.7|^2 = 0.25
  double det = 1.0 - k12 * k12;
  double s2 = 0.25;
  auto joint = [&](double f1, double f2) {
    double quad = (f1 * f1 - 2.0 * k12 * f1 * f2 + f2 * f2) / det;
    double prior = std::exp(-0.5 * quad) / (2.0 * M_PI * std::sqrt(det));
    double lik = std::exp(log_normal_pdf(d.y(0), f1, s2) + log_normal_pdf(d.y(1), f2, s2));
    return prior * lik;
  };
  double outer = integrate(
      [&](double f1) {
        return integrate([&](double f2) { return joint(f1, f2); }, -8.0, 8.0, 1e-11);
      },
      -8.0, 8.0, 1e-10);
  CHECK(lm == doctest::Approx(std::log(outer)).epsilon(1e-6));
}

TEST_CASE("fractional marginal is continuous at alpha near one") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  double a1 = log_fractional_marginal(d, ModelIndex({1}, 1), 2.0, cfg, 1.0);
  double a2 = log_fractional_marginal(d, ModelIndex({1}, 1), 2.0, cfg, 0.999999);
  CHECK(std::fabs(a1 - a2) < 1e-3);
}

TEST_CASE("noise-rescaling identity links the fractional and unit-alpha marginals") {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 12;
    RegressionData d;
    d.x.resize(n, 2);
    d.y.resize(n);
    for (int i = 0; i < n; ++i) {
      d.x(i, 0) = rng.uniform();
      d.x(i, 1) = rng.uniform();
      d.y(i) = rng.normal();
    }
    double alpha = rng.uniform(0.2, 0.95);
    GpConfig cfg;
    cfg.noise_sd = 0.6;
    ModelIndex idx({1, 2}, 2);
    double frac = log_fractional_marginal(d, idx, 3.0, cfg, alpha);
    GpConfig inflated = cfg;
    inflated.noise_sd = cfg.noise_sd / std::sqrt(alpha);
    double plain = log_fractional_marginal(d, idx, 3.0, inflated, 1.0);
    double c = log_fractional_constant(alpha, n, cfg.noise_sd);
    CHECK(frac - c == doctest::Approx(plain).epsilon(1e-10));
  }
}

TEST_CASE("marginals are exchangeable under row permutations") {
  RegressionData d;
  d.x.resize(3, 1);
  d.x << 0.1, 0.5, 0.9;
  d.y.resize(3);
  d.y << 1.0, -0.5, 0.2;
  RegressionData perm;
  perm.x.resize(3, 1);
  perm.x << 0.9, 0.1, 0.5;
  perm.y.resize(3);
  perm.y << 0.2, 1.0, -0.5;
  GpConfig cfg;
  ModelIndex idx({1}, 1);
  CHECK(log_fractional_marginal(d, idx, 2.5, cfg, 0.7) ==
        doctest::Approx(log_fractional_marginal(perm, idx, 2.5, cfg, 0.7)).epsilon(1e-10));
  CHECK(integrate_bandwidth(d, idx, cfg, 0.7) ==
        doctest::Approx(integrate_bandwidth(perm, idx, cfg, 0.7)).epsilon(1e-10));
}

TEST_CASE("jitter escalation stays within tolerance on a degenerate design") {
  // duplicated rows make the kernel matrix singular at tiny noise
  RegressionData d;
  d.x.resize(4, 1);
  d.x << 0.3, 0.3, 0.3, 0.8;
  d.y.resize(4);
  d.y << 0.1, 0.1, 0.1, -0.2;
  GpConfig cfg;
  cfg.noise_sd = 1e-4;
  double lm = log_fractional_marginal(d, ModelIndex({1}, 1), 2.0, cfg, 1.0);
  CHECK(std::isfinite(lm));
}

TEST_CASE("collapsed bandwidth range degenerates to the fixed-bandwidth marginal") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  ModelIndex idx({1}, 1);
  double a_lo = bandwidth_floor(cfg, d.n(), 1);
  GpConfig collapsed = cfg;
  collapsed.bandwidth_max_factor = a_lo * (1.0 + 1e-10) / d.n();
  double v = integrate_bandwidth(d, idx, collapsed, 1.0);
  double fixed = log_fractional_marginal(d, idx, a_lo, cfg, 1.0);
  CHECK(v == doctest::Approx(fixed).epsilon(1e-8));
}

TEST_CASE("bandwidth grid refinement is converged at the default resolution") {
  RegressionData d = two_point_data();
  GpConfig g32, g64;
  g32.bandwidth_grid = 32;
  g64.bandwidth_grid = 64;
  ModelIndex idx({1}, 1);
  double v32 = integrate_bandwidth(d, idx, g32, 1.0);
  double v64 = integrate_bandwidth(d, idx, g64, 1.0);
  CHECK(std::fabs(v32 - v64) < 1e-4);
}

TEST_CASE("concentrated bandwidth prior approaches the fixed-bandwidth marginal") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  cfg.bandwidth_grid = 1024;
  cfg.bandwidth_shape = 4000.0;
  cfg.bandwidth_scale = 0.005;  // A^1 ~ Gamma(4000, 0.005): mean 20, sd ~0.3
  ModelIndex idx({1}, 1);
  double integrated = integrate_bandwidth(d, idx, cfg, 1.0);
  double fixed = log_fractional_marginal(d, idx, 20.0, cfg, 1.0);
  CHECK(std::fabs(integrated - fixed) < 5e-3);
}

TEST_CASE("integrate_bandwidth rejects empty subsets and bad ranges") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  CHECK_THROWS_AS((void)integrate_bandwidth(d, ModelIndex::empty(1), cfg, 1.0),
                  std::invalid_argument);
}

TEST_CASE("gp prior draws become constant in the flat-kernel limit") {
  GpConfig cfg;
  cfg.sup_norm_cap = 50.0;
  Eigen::MatrixXd pts(5, 1);
  pts << 0.0, 0.25, 0.5, 0.75, 1.0;
  ModelIndex idx({1}, 1);
  for (std::uint64_t s = 1; s <= 20; ++s) {
    std::vector<double> f = gp_prior_sample(idx, 1e-6, pts, cfg, s);
    for (std::size_t i = 1; i < f.size(); ++i) {
      CHECK(std::fabs(f[i] - f[0]) < 1e-3);
    }
  }
}

TEST_CASE("gp prior draws have unit variance and decorrelate far apart") {
  GpConfig cfg;
  cfg.sup_norm_cap = 1e9;  // effectively no rejection
  Eigen::MatrixXd pts(2, 1);
  pts << 0.0, 1.0;
  ModelIndex idx({1}, 1);
  const int n = 10000;
  double s1 = 0.0, s11 = 0.0, cross = 0.0;
  for (int i = 0; i < n; ++i) {
    std::vector<double> f = gp_prior_sample(idx, 50.0, pts, cfg, 1000 + i);
    s1 += f[0];
    s11 += f[0] * f[0];
    cross += f[0] * f[1];
  }
  double mean = s1 / n;
  double var = s11 / n - mean * mean;
  double corr = (cross / n - 0.0) / var;
  // variance within 3 se of 1 (se of a chi-square mean ~ sqrt(2/n))
  CHECK(std::fabs(var - 1.0) <= 3.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(corr) <= 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("sup-norm rejection errors out when the cap is unreachable") {
  GpConfig cfg;
  cfg.sup_norm_cap = 1e-6;
  Eigen::MatrixXd pts(3, 1);
  pts << 0.1, 0.5, 0.9;
  CHECK_THROWS_AS((void)gp_prior_sample(ModelIndex({1}, 1), 2.0, pts, cfg, 7, 50),
                  std::runtime_error);
}

TEST_CASE("predictive mean interpolates training data as noise vanishes") {
  RegressionData d;
  d.x.resize(3, 1);
  d.x << 0.2, 0.5, 0.8;
  d.y.resize(3);
  d.y << 1.0, -1.0, 0.5;
  GpConfig cfg;
  cfg.noise_sd = 1e-5;
  Eigen::MatrixXd test(1, 1);
  test << 0.5;
  std::vector<double> pred =
      posterior_predictive_mean(d, ModelIndex({1}, 1), 2.0, cfg, 1.0, test);
  CHECK(pred[0] == doctest::Approx(-1.0).epsilon(1e-4));
}

TEST_CASE("two-point predictive mean matches the brute-force quadrature oracle") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  cfg.noise_sd = 0.5;
  const double a = 1.8;
  ModelIndex idx({1}, 1);
  Eigen::MatrixXd test(1, 1);
  test << 0.4;
  double pred = posterior_predictive_mean(d, idx, a, cfg, 1.0, test)[0];

  // oracle: E[f(x*) | y] by 3-d Gaussian algebra reduced to 2-d quadrature
  // over the training function values, with the conditional prior mean of
  // f(x*) given (f1, f2) inside
  double k12 = std::exp(-a * a * 0.25);
  double k1s = std::exp(-a * a * 0.04);  // |0.2-0.4|^2
  double k2s = std::exp(-a * a * 0.09);  // |0.7-0.4|^2
  double det = 1.0 - k12 * k12;
  double s2 = 0.25;
  auto wgt = [&](double f1, double f2) {
    double quad = (f1 * f1 - 2.0 * k12 * f1 * f2 + f2 * f2) / det;
    double prior = std::exp(-0.5 * quad);
    double lik = std::exp(-0.5 * ((d.y(0) - f1) * (d.y(0) - f1) / s2 +
                                  (d.y(1) - f2) * (d.y(1) - f2) / s2));
    return prior * lik;
  };
  auto cond_mean = [&](double f1, double f2) {
    // E[f(x*) | f1, f2] = [k1s k2s] K^{-1} [f1 f2]^T
    double w1 = (k1s - k12 * k2s) / det;
    double w2 = (k2s - k12 * k1s) / det;
    return w1 * f1 + w2 * f2;
  };
  double z = integrate(
      [&](double f1) {
        return integrate([&](double f2) { return wgt(f1, f2); }, -8.0, 8.0, 1e-11);
      },
      -8.0, 8.0, 1e-10);
  double num = integrate(
      [&](double f1) {
        return integrate([&](double f2) { return wgt(f1, f2) * cond_mean(f1, f2); }, -8.0, 8.0,
                         1e-11);
      },
      -8.0, 8.0, 1e-10);
  CHECK(pred == doctest::Approx(num / z).epsilon(1e-6));
}

TEST_CASE("halving alpha equals doubling the noise variance in prediction") {
  RegressionData d = two_point_data();
  GpConfig cfg;
  cfg.noise_sd = 0.5;
  Eigen::MatrixXd test(2, 1);
  test << 0.3, 0.6;
  ModelIndex idx({1}, 1);
  std::vector<double> frac = posterior_predictive_mean(d, idx, 2.0, cfg, 0.5, test);
  GpConfig doubled = cfg;
  doubled.noise_sd = cfg.noise_sd * std::sqrt(2.0);
  std::vector<double> plain = posterior_predictive_mean(d, idx, 2.0, doubled, 1.0, test);
  for (std::size_t i = 0; i < frac.size(); ++i) {
    CHECK(frac[i] == doctest::Approx(plain[i]).epsilon(1e-12));
  }
}

TEST_CASE("bandwidth sampling respects the truncated support") {
  GpConfig cfg;
  cfg.smoothness = 1.0;
  for (int d = 1; d <= 3; ++d) {
    double lo = bandwidth_floor(cfg, 400, d);
    Rng seeds(99);
    for (int i = 0; i < 200; ++i) {
      double a = sample_bandwidth(cfg, 400, d, seeds.next_u64());
      CHECK(a >= lo * (1.0 - 1e-12));
      CHECK(a <= 4.0 * 400.0 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("config validation rejects nonpositive parameters") {
  GpConfig cfg;
  cfg.noise_sd = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  GpConfig cfg2;
  cfg2.bandwidth_grid = 2;
  CHECK_THROWS_AS(cfg2.validate(), std::invalid_argument);
  RegressionData bad;
  bad.x.resize(1, 1);
  bad.x << 1.5;
  bad.y.resize(1);
  bad.y << 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
