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

#include "fracbayes/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fracbayes/quadrature.hpp"

namespace fracbayes {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;
// Evaluations below this are treated as "density vanishes" when checking
// absolute continuity.
constexpr double kVanishTol = 1e-300;

double checked_pdf(const Density& d, double x) {
  double v = d.pdf(x);
  if (v < 0.0) {
    throw std::invalid_argument("density '" + d.name + "' evaluated negative at x=" +
                                std::to_string(x));
  }
  return v;
}

struct Interval {
  double lo, hi;
};

Interval hull(const Density& p, const Density& q) {
  return {std::min(p.support_lo, q.support_lo), std::max(p.support_hi, q.support_hi)};
}

bool overlaps(const Density& p, const Density& q) {
  return std::min(p.support_hi, q.support_hi) > std::max(p.support_lo, q.support_lo);
}

template <typename F>
std::pair<double, double> mc_mean_se(F&& g, const Density& sampling, std::size_t n,
                                     std::uint64_t seed) {
  if (!sampling.has_sampler()) {
    throw std::invalid_argument("density '" + sampling.name + "' has no sampler");
  }
  Rng rng(seed);
  double sum = 0.0, sumsq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double x = sampling.sampler(rng);
    double v = g(x);
    sum += v;
    sumsq += v * v;
  }
  double mean = sum / static_cast<double>(n);
  double var = std::max(0.0, sumsq / static_cast<double>(n) - mean * mean);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace

double DivergenceValue::value() const {
  if (infinite_) {
    throw std::domain_error("divergence is infinite: " + diagnostic_);
  }
  return value_;
}

Density normal_density(double mu, double sd) {
  if (sd <= 0.0) throw std::invalid_argument("normal: sd must be positive");
  Density d;
  d.pdf = [mu, sd](double x) {
    double z = (x - mu) / sd;
    return std::exp(-0.5 * z * z) / (sd * kSqrt2Pi);
  };
  d.support_lo = mu - 10.0 * sd;
  d.support_hi = mu + 10.0 * sd;
  d.sampler = [mu, sd](Rng& rng) { return rng.normal(mu, sd); };
  d.name = "normal(" + std::to_string(mu) + "," + std::to_string(sd) + ")";
  return d;
}

Density uniform_density(double lo, double hi) {
  if (!(hi > lo)) throw std::invalid_argument("uniform: hi must exceed lo");
  Density d;
  double h = 1.0 / (hi - lo);
  d.pdf = [lo, hi, h](double x) { return (x >= lo && x <= hi) ? h : 0.0; };
  d.support_lo = lo;
  d.support_hi = hi;
  d.sampler = [lo, hi](Rng& rng) { return rng.uniform(lo, hi); };
  d.name = "uniform(" + std::to_string(lo) + "," + std::to_string(hi) + ")";
  return d;
}

Density gaussian_mixture_density(double w1, double mu1, double sd1, double mu2, double sd2) {
  if (w1 < 0.0 || w1 > 1.0) throw std::invalid_argument("mixture: weight outside [0,1]");
  Density a = normal_density(mu1, sd1), b = normal_density(mu2, sd2);
  Density d;
  d.pdf = [w1, a, b](double x) { return w1 * a.pdf(x) + (1.0 - w1) * b.pdf(x); };
  d.support_lo = std::min(a.support_lo, b.support_lo);
  d.support_hi = std::max(a.support_hi, b.support_hi);
  d.sampler = [w1, mu1, sd1, mu2, sd2](Rng& rng) {
    return rng.uniform() < w1 ? rng.normal(mu1, sd1) : rng.normal(mu2, sd2);
  };
  d.name = "mixture";
  return d;
}

DivergenceValue hellinger(const Density& p, const Density& q) {
  if (!overlaps(p, q)) {
    return DivergenceValue::finite(std::sqrt(2.0), EstimatorKind::kQuadrature);
  }
  Interval box = hull(p, q);
  double h2 = integrate(
      [&](double x) {
        double sp = std::sqrt(checked_pdf(p, x));
        double sq = std::sqrt(checked_pdf(q, x));
        return (sp - sq) * (sp - sq);
      },
      box.lo, box.hi);
  h2 = std::clamp(h2, 0.0, 2.0);
  return DivergenceValue::finite(std::sqrt(h2), EstimatorKind::kQuadrature);
}

DivergenceValue kl(const Density& p, const Density& q) {
  bool support_violated = false;
  double violate_at = 0.0;
  double d = 0.0;
  try {
    d = integrate(
        [&](double x) {
          double px = checked_pdf(p, x);
          if (px <= kVanishTol) return 0.0;
          double qx = checked_pdf(q, x);
          if (qx <= kVanishTol) {
            support_violated = true;
            violate_at = x;
            return 0.0;
          }
          return px * std::log(px / qx);
        },
        p.support_lo, p.support_hi);
  } catch (const QuadratureFailure&) {
    if (!support_violated) throw;
  }
  if (support_violated) {
    return DivergenceValue::infinity("q vanishes at x=" + std::to_string(violate_at) +
                                     " where p has mass");
  }
  return DivergenceValue::finite(std::max(0.0, d), EstimatorKind::kQuadrature);
}

DivergenceValue v_discrepancy(const Density& p, const Density& q) {
  DivergenceValue d = kl(p, q);
  if (d.is_infinite()) return d;
  double dv = d.value();
  bool support_violated = false;
  double violate_at = 0.0;
  double v = integrate(
      [&](double x) {
        double px = checked_pdf(p, x);
        if (px <= kVanishTol) return 0.0;
        double qx = checked_pdf(q, x);
        if (qx <= kVanishTol) {
          support_violated = true;
          violate_at = x;
          return 0.0;
        }
        double r = std::log(px / qx) - dv;
        return px * r * r;
      },
      p.support_lo, p.support_hi);
  if (support_violated) {
    return DivergenceValue::infinity("q vanishes at x=" + std::to_string(violate_at) +
                                     " where p has mass");
  }
  return DivergenceValue::finite(std::max(0.0, v), EstimatorKind::kQuadrature);
}

namespace {

double affinity_integral(const Density& p, const Density& q, double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
  }
  if (!overlaps(p, q)) return 0.0;
  Interval box = hull(p, q);
  double a = integrate(
      [&](double x) {
        double px = checked_pdf(p, x);
        double qx = checked_pdf(q, x);
        if (px <= 0.0 || qx <= 0.0) return 0.0;
        return std::pow(px, alpha) * std::pow(qx, 1.0 - alpha);
      },
      box.lo, box.hi);
  return std::clamp(a, 0.0, 1.0);
}

}  // namespace

DivergenceValue renyi(const Density& p, const Density& q, double alpha) {
  double a = affinity_integral(p, q, alpha);
  if (a <= 0.0) {
    return DivergenceValue::infinity("alpha-affinity vanished: disjoint supports");
  }
  double d = std::log(a) / (alpha - 1.0);
  return DivergenceValue::finite(std::max(0.0, d), EstimatorKind::kQuadrature);
}

DivergenceValue affinity(const Density& p, const Density& q, double alpha) {
  return DivergenceValue::finite(affinity_integral(p, q, alpha), EstimatorKind::kQuadrature);
}

DivergenceValue hellinger_mc(const Density& p, const Density& q, std::size_t n,
                             std::uint64_t seed) {
  // E_p[(1 - sqrt(q/p))^2] + q-side mass where p vanishes; for the built-in
  // overlapping families the first term is the whole integral.
  auto [m, se] = mc_mean_se(
      [&](double x) {
        double px = checked_pdf(p, x);
        double qx = checked_pdf(q, x);
        if (px <= kVanishTol) return 0.0;
        double r = 1.0 - std::sqrt(qx / px);
        return r * r;
      },
      p, n, seed);
  // h = sqrt(h^2); delta-method standard error.
  double h2 = std::clamp(m, 0.0, 2.0);
  double h = std::sqrt(h2);
  double hse = (h > 1e-12) ? se / (2.0 * h) : std::sqrt(se);
  return DivergenceValue::finite(h, EstimatorKind::kMonteCarlo, hse);
}

DivergenceValue kl_mc(const Density& p, const Density& q, std::size_t n, std::uint64_t seed) {
  bool violated = false;
  auto [m, se] = mc_mean_se(
      [&](double x) {
        double px = checked_pdf(p, x);
        double qx = checked_pdf(q, x);
        if (qx <= kVanishTol) {
          violated = true;
          return 0.0;
        }
        return std::log(px / qx);
      },
      p, n, seed);
  if (violated) return DivergenceValue::infinity("q vanished on a p-sample");
  return DivergenceValue::finite(m, EstimatorKind::kMonteCarlo, se);
}

DivergenceValue v_discrepancy_mc(const Density& p, const Density& q, std::size_t n,
                                 std::uint64_t seed) {
  // Variance of the log ratio under p; single pass, then unbias by n/(n-1).
  if (!p.has_sampler()) throw std::invalid_argument("p has no sampler");
  Rng rng(seed);
  std::vector<double> vals;
  vals.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = p.sampler(rng);
    double px = checked_pdf(p, x);
    double qx = checked_pdf(q, x);
    if (qx <= kVanishTol) return DivergenceValue::infinity("q vanished on a p-sample");
    vals.push_back(std::log(px / qx));
  }
  double mean = 0.0;
  for (double v : vals) mean += v;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m4 = 0.0;
  for (double v : vals) {
    double d = v - mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  m2 /= static_cast<double>(n);
  m4 /= static_cast<double>(n);
  double var_est = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
  double se = std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n));
  return DivergenceValue::finite(var_est, EstimatorKind::kMonteCarlo, se);
}

DivergenceValue affinity_mc(const Density& p, const Density& q, double alpha, std::size_t n,
                            std::uint64_t seed) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
  }
  auto [m, se] = mc_mean_se(
      [&](double x) {
        double px = checked_pdf(p, x);
        double qx = checked_pdf(q, x);
        if (px <= kVanishTol) return 0.0;
        return std::pow(qx / px, 1.0 - alpha);
      },
      p, n, seed);
  return DivergenceValue::finite(std::clamp(m, 0.0, 1.0), EstimatorKind::kMonteCarlo, se);
}

DivergenceValue renyi_mc(const Density& p, const Density& q, double alpha, std::size_t n,
                         std::uint64_t seed) {
  DivergenceValue a = affinity_mc(p, q, alpha, n, seed);
  double av = a.value();
  if (av <= 0.0) return DivergenceValue::infinity("alpha-affinity estimate vanished");
  double d = std::log(av) / (alpha - 1.0);
  double se = a.standard_error() / (av * (1.0 - alpha));
  return DivergenceValue::finite(std::max(0.0, d), EstimatorKind::kMonteCarlo, se);
}

FractionalIdentityReport fractional_identity_check(const Density& alt, const Density& truth,
                                                   double alpha, std::size_t n_mc,
                                                   std::uint64_t seed) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("alpha must lie strictly inside (0,1)");
  }
  auto [m, se] = mc_mean_se(
      [&](double x) {
        double pt = checked_pdf(truth, x);
        double pa = checked_pdf(alt, x);
        if (pt <= kVanishTol) return 0.0;
        return std::pow(pa / pt, alpha);
      },
      truth, n_mc, seed);
  FractionalIdentityReport rep;
  rep.mc_mean = m;
  rep.mc_se = se;
  DivergenceValue d = renyi(alt, truth, alpha);
  rep.theory = d.is_infinite() ? 0.0 : std::exp(-(1.0 - alpha) * d.value());
  rep.degenerate = (se <= 0.0);
  rep.pass = rep.degenerate ? std::fabs(m - rep.theory) <= 1e-9
                            : std::fabs(m - rep.theory) <= 3.0 * se;
  return rep;
}

DivergenceValue compute_divergence(const std::string& measure, const Density& p, const Density& q,
                                   std::optional<double> alpha) {
  if (measure == "hellinger") return hellinger(p, q);
  if (measure == "kl") return kl(p, q);
  if (measure == "v") return v_discrepancy(p, q);
  if (measure == "renyi" || measure == "affinity") {
    if (!alpha) throw std::invalid_argument(measure + " requires an alpha");
    return measure == "renyi" ? renyi(p, q, *alpha) : affinity(p, q, *alpha);
  }
  throw std::invalid_argument("unknown measure '" + measure + "'");
}

}  // namespace fracbayes
