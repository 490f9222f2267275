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

#ifndef FRACBAYES_DIVERGENCE_HPP_
#define FRACBAYES_DIVERGENCE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "fracbayes/rng.hpp"

namespace fracbayes {

// One-dimensional probability density with an explicit effective support.
// Unbounded families (Gaussian) carry a truncated support chosen so the
// excluded tail mass is far below quadrature tolerance.
struct Density {
  std::function<double(double)> pdf;
  double support_lo = 0.0;
  double support_hi = 1.0;
  // Optional exact sampler; required by the Monte Carlo estimators.
  std::function<double(Rng&)> sampler;
  std::string name;

  bool has_sampler() const { return static_cast<bool>(sampler); }
};

// Gaussians integrate on [mu - 10 sd, mu + 10 sd]; tail mass ~ 1e-23.
Density normal_density(double mu, double sd);
Density uniform_density(double lo, double hi);
// Two-component Gaussian mixture; handy for randomized property suites.
Density gaussian_mixture_density(double w1, double mu1, double sd1, double mu2, double sd2);

enum class EstimatorKind { kQuadrature, kMonteCarlo };

// Value of a discrepancy measure together with how it was obtained. KL on a
// support violation returns a tagged infinity: consumers must check
// is_infinite() before using value(), which throws on the sentinel so that
// infinities cannot leak into averages unnoticed.
class DivergenceValue {
 public:
  static DivergenceValue finite(double v, EstimatorKind kind, double se = 0.0) {
    DivergenceValue out;
    out.value_ = v;
    out.kind_ = kind;
    out.se_ = se;
    return out;
  }
  static DivergenceValue infinity(std::string diagnostic) {
    DivergenceValue out;
    out.infinite_ = true;
    out.diagnostic_ = std::move(diagnostic);
    return out;
  }

  bool is_infinite() const { return infinite_; }
  double value() const;
  double standard_error() const { return se_; }
  EstimatorKind kind() const { return kind_; }
  const std::string& diagnostic() const { return diagnostic_; }

 private:
  double value_ = 0.0;
  double se_ = 0.0;
  bool infinite_ = false;
  EstimatorKind kind_ = EstimatorKind::kQuadrature;
  std::string diagnostic_;
};

// h(p,q) = (int (sqrt p - sqrt q)^2 dmu)^{1/2}; symmetric, in [0, sqrt 2].
// Non-overlapping supports short-circuit to sqrt(2) exactly.
DivergenceValue hellinger(const Density& p, const Density& q);

// D(p,q) = int p log(p/q) dmu. Returns the infinity sentinel when q vanishes
// where p carries mass.
DivergenceValue kl(const Density& p, const Density& q);

// V(p,q) = int p |log(p/q) - D(p,q)|^2 dmu, the variance of the log ratio
// under p.
DivergenceValue v_discrepancy(const Density& p, const Density& q);

// Renyi divergence of order alpha in (0,1).
DivergenceValue renyi(const Density& p, const Density& q, double alpha);

// alpha-affinity A_alpha = int p^alpha q^{1-alpha} dmu = exp{(alpha-1) D_alpha}.
DivergenceValue affinity(const Density& p, const Density& q, double alpha);

// Monte Carlo twins of the measures above, sampling from p (and from q as
// well for the symmetric Hellinger integrand).
DivergenceValue hellinger_mc(const Density& p, const Density& q, std::size_t n, std::uint64_t seed);
DivergenceValue kl_mc(const Density& p, const Density& q, std::size_t n, std::uint64_t seed);
DivergenceValue v_discrepancy_mc(const Density& p, const Density& q, std::size_t n,
                                 std::uint64_t seed);
DivergenceValue renyi_mc(const Density& p, const Density& q, double alpha, std::size_t n,
                         std::uint64_t seed);
DivergenceValue affinity_mc(const Density& p, const Density& q, double alpha, std::size_t n,
                            std::uint64_t seed);

// Report of the fractional-likelihood penalization identity
// E_{p*}[(p/p*)^alpha] = exp{-(1-alpha) D_alpha(p, p*)}.
struct FractionalIdentityReport {
  double mc_mean = 0.0;
  double mc_se = 0.0;
  double theory = 0.0;
  bool pass = false;
  bool degenerate = false;  // zero-variance sampler; flagged, not an error
};

FractionalIdentityReport fractional_identity_check(const Density& alt, const Density& truth,
                                                   double alpha, std::size_t n_mc,
                                                   std::uint64_t seed);

DivergenceValue compute_divergence(const std::string& measure, const Density& p, const Density& q,
                                   std::optional<double> alpha);

}  // namespace fracbayes

#endif  // FRACBAYES_DIVERGENCE_HPP_
