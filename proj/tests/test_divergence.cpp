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

#include "fracbayes/divergence.hpp"
#include "fracbayes/quadrature.hpp"
#include "fracbayes/rng.hpp"
#include "test_support.hpp"

using namespace fracbayes;
namespace ts = testsupport;

TEST_CASE("hellinger matches the closed-form Gaussian value") {
  Density p = normal_density(0.0, 1.0);
  Density q = normal_density(1.0, 1.0);
  double h = hellinger(p, q).value();
  double expected = std::sqrt(ts::gaussian_hellinger_sq(0.0, 1.0, 1.0, 1.0));
  CHECK(h == doctest::Approx(expected).epsilon(1e-8));
  // 2 (1 - e^{-1/8})
  CHECK(h * h == doctest::Approx(2.0 * (1.0 - std::exp(-0.125))).epsilon(1e-8));
  // symmetry
  CHECK(hellinger(q, p).value() == doctest::Approx(h).epsilon(1e-12));
}

TEST_CASE("hellinger of identical densities vanishes") {
  Density p = normal_density(0.3, 0.7);
  CHECK(hellinger(p, p).value() <= 1e-10);
}

TEST_CASE("hellinger of half-overlapping uniforms") {
  Density p = uniform_density(0.0, 1.0);
  Density q = uniform_density(0.5, 1.5);
  double h = hellinger(p, q).value();
  CHECK(h * h == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("hellinger of disjoint supports is exactly sqrt 2") {
  Density p = uniform_density(0.0, 1.0);
  Density q = uniform_density(2.0, 3.0);
  CHECK(hellinger(p, q).value() == std::sqrt(2.0));
}

TEST_CASE("negative density evaluation is rejected") {
  Density bad;
  bad.pdf = [](double x) { return x < 0.5 ? 1.0 : -0.1; };
  bad.support_lo = 0.0;
  bad.support_hi = 1.0;
  bad.name = "bad";
  Density q = uniform_density(0.0, 1.0);
  CHECK_THROWS_AS((void)hellinger(bad, q), std::invalid_argument);
}

TEST_CASE("kl matches the closed-form Gaussian values") {
  CHECK(kl(normal_density(0, 1), normal_density(1, 1)).value() ==
        doctest::Approx(0.5).epsilon(1e-8));
  double expected = 0.5 * (0.25 - 1.0 + std::log(4.0));
  CHECK(kl(normal_density(0, 1), normal_density(0, 2)).value() ==
        doctest::Approx(expected).epsilon(1e-8));
  CHECK(kl(normal_density(0, 1), normal_density(0, 2)).value() ==
        doctest::Approx(ts::gaussian_kl(0, 1, 0, 2)).epsilon(1e-10));
}

TEST_CASE("kl of a density with itself vanishes") {
  Density p = normal_density(-1.0, 2.0);
  CHECK(kl(p, p).value() <= 1e-10);
}

TEST_CASE("kl on a support violation returns the tagged infinity") {
  Density p = uniform_density(0.0, 1.0);
  Density q = uniform_density(0.5, 1.5);
  DivergenceValue v = kl(p, q);
  CHECK(v.is_infinite());
  CHECK_THROWS_AS((void)v.value(), std::domain_error);
  CHECK(!v.diagnostic().empty());
}

TEST_CASE("v discrepancy matches the variance of the log ratio") {
  CHECK(v_discrepancy(normal_density(0, 1), normal_density(1, 1)).value() ==
        doctest::Approx(1.0).epsilon(1e-8));
  CHECK(v_discrepancy(normal_density(0, 1), normal_density(2, 1)).value() ==
        doctest::Approx(4.0).epsilon(1e-8));
  Density p = normal_density(0.2, 1.3);
  CHECK(v_discrepancy(p, p).value() <= 1e-10);
}

TEST_CASE("renyi matches the same-variance Gaussian closed form") {
  Density p = normal_density(0, 1), q = normal_density(1, 1);
  CHECK(renyi(p, q, 0.5).value() == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(renyi(p, q, 0.9).value() == doctest::Approx(0.45).epsilon(1e-8));
  CHECK(renyi(p, p, 0.37).value() <= 1e-10);
  CHECK_THROWS_AS((void)renyi(p, q, 1.0), std::invalid_argument);
  CHECK_THROWS_AS((void)renyi(p, q, 0.0), std::invalid_argument);
  CHECK_THROWS_AS((void)renyi(p, q, -0.2), std::invalid_argument);
}

TEST_CASE("affinity matches the Gaussian closed form and the Hellinger affinity at 1/2") {
  Density p = normal_density(0, 1), q = normal_density(1, 1);
  CHECK(affinity(p, q, 0.5).value() == doctest::Approx(std::exp(-0.125)).epsilon(1e-8));
  CHECK(affinity(p, p, 0.5).value() == doctest::Approx(1.0).epsilon(1e-10));
  // A_{1/2} equals the Hellinger affinity 1 - h^2/2
  double h2 = hellinger(p, q).value();
  h2 *= h2;
  CHECK(affinity(p, q, 0.5).value() == doctest::Approx(1.0 - 0.5 * h2).epsilon(1e-8));
}

TEST_CASE("nonnegativity, affinity bounds and alpha monotonicity on random Gaussian pairs") {
  Rng rng(0xD1CEu);
  for (int trial = 0; trial < 25; ++trial) {
    double mu1 = rng.uniform(-2.0, 2.0), mu2 = rng.uniform(-2.0, 2.0);
    double s1 = rng.uniform(0.4, 2.5), s2 = rng.uniform(0.4, 2.5);
    Density p = normal_density(mu1, s1), q = normal_density(mu2, s2);
    CHECK(hellinger(p, q).value() >= 0.0);
    CHECK(kl(p, q).value() >= 0.0);
    CHECK(v_discrepancy(p, q).value() >= 0.0);
    double prev = -1.0;
    for (double a = 0.1; a < 0.95; a += 0.1) {
      double af = affinity(p, q, a).value();
      CHECK(af >= 0.0);
      CHECK(af <= 1.0);
      double d = renyi(p, q, a).value();
      CHECK(d >= 0.0);
      CHECK(d >= prev - 1e-9);  // Renyi divergence is nondecreasing in alpha
      prev = d;
      // cross-check against the closed form
      CHECK(d == doctest::Approx(ts::gaussian_renyi(mu1, s1, mu2, s2, a)).epsilon(1e-6));
    }
    CHECK(kl(p, q).value() == doctest::Approx(ts::gaussian_kl(mu1, s1, mu2, s2)).epsilon(1e-6));
    CHECK(v_discrepancy(p, q).value() ==
          doctest::Approx(ts::gaussian_v(mu1, s1, mu2, s2)).epsilon(1e-6));
  }
}

TEST_CASE("quadrature and Monte Carlo estimators agree within 3 combined ses") {
  Density p = normal_density(0.0, 1.0);
  Density q = normal_density(0.8, 1.4);
  const std::size_t n = 400000;
  {
    auto qd = hellinger(p, q);
    auto mc = hellinger_mc(p, q, n, 11);
    CHECK(std::fabs(qd.value() - mc.value()) <= 3.0 * (mc.standard_error() + 1e-9));
  }
  {
    auto qd = kl(p, q);
    auto mc = kl_mc(p, q, n, 12);
    CHECK(std::fabs(qd.value() - mc.value()) <= 3.0 * (mc.standard_error() + 1e-9));
  }
  {
    auto qd = v_discrepancy(p, q);
    auto mc = v_discrepancy_mc(p, q, n, 13);
    CHECK(std::fabs(qd.value() - mc.value()) <= 3.0 * (mc.standard_error() + 1e-9));
  }
  {
    auto qd = renyi(p, q, 0.6);
    auto mc = renyi_mc(p, q, 0.6, n, 14);
    CHECK(std::fabs(qd.value() - mc.value()) <= 3.0 * (mc.standard_error() + 1e-9));
    CHECK(mc.kind() == EstimatorKind::kMonteCarlo);
    CHECK(qd.kind() == EstimatorKind::kQuadrature);
    CHECK(qd.standard_error() == 0.0);
  }
  {
    auto qd = affinity(p, q, 0.3);
    auto mc = affinity_mc(p, q, 0.3, n, 15);
    CHECK(std::fabs(qd.value() - mc.value()) <= 3.0 * (mc.standard_error() + 1e-9));
  }
}

TEST_CASE("built-in densities integrate to one") {
  Density fams[] = {normal_density(0.0, 1.0), normal_density(2.0, 0.3),
                    uniform_density(-1.0, 2.0), gaussian_mixture_density(0.3, -1, 0.5, 2, 1.5)};
  for (const Density& d : fams) {
    double mass = integrate([&](double x) { return d.pdf(x); }, d.support_lo, d.support_hi);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("fractional identity: trivial, Gaussian pairs, degenerate") {
  Density truth = normal_density(0.0, 1.0);
  {
    FractionalIdentityReport rep = fractional_identity_check(truth, truth, 0.5, 20000, 5);
    CHECK(rep.theory == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.pass);
  }
  {
    Density alt = normal_density(1.0, 1.0);
    FractionalIdentityReport rep = fractional_identity_check(alt, truth, 0.5, 100000, 6);
    CHECK(rep.theory == doctest::Approx(std::exp(-0.125)).epsilon(1e-7));
    CHECK(rep.pass);
    FractionalIdentityReport rep9 = fractional_identity_check(alt, truth, 0.9, 100000, 7);
    CHECK(rep9.theory == doctest::Approx(std::exp(-0.1 * 0.45)).epsilon(1e-7));
    CHECK(rep9.pass);
  }
  {
    // degenerate sampler: identical densities give zero-variance ratios
    FractionalIdentityReport rep = fractional_identity_check(truth, truth, 0.3, 1000, 8);
    CHECK(rep.degenerate);
    CHECK(rep.pass);
  }
}

TEST_CASE("compute_divergence dispatch") {
  Density p = normal_density(0, 1), q = normal_density(1, 1);
  CHECK(compute_divergence("kl", p, q, std::nullopt).value() ==
        doctest::Approx(0.5).epsilon(1e-8));
  CHECK(compute_divergence("renyi", p, q, 0.5).value() == doctest::Approx(0.25).epsilon(1e-8));
  CHECK_THROWS_AS((void)compute_divergence("renyi", p, q, std::nullopt), std::invalid_argument);
  CHECK_THROWS_AS((void)compute_divergence("nope", p, q, std::nullopt), std::invalid_argument);
}
