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

#include "fracbayes/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fracbayes/quadrature.hpp"

namespace fracbayes {

namespace {

constexpr double kPi = 3.14159265358979323846;

double basis_e(int k, double x) {
  if (k == 0) return 1.0;
  return std::sqrt(2.0) * std::cos(k * kPi * x);
}

}  // namespace

void TruthSpec::validate(double sup_cap, std::size_t probe) const {
  if (p < 1) throw std::invalid_argument("TruthSpec: p must be positive");
  Rng rng(0x715EC5u);
  std::vector<double> x(p);
  for (std::size_t i = 0; i < probe; ++i) {
    for (int c = 0; c < p; ++c) x[c] = rng.uniform();
    if (std::fabs(f(x)) > sup_cap) {
      throw std::invalid_argument("TruthSpec: |f| exceeds the declared sup cap on a probe point");
    }
  }
}

DeltaBasisResult delta_basis(const TruthSpec& truth, int trunc, int quad_nodes) {
  if (trunc < 1) throw std::invalid_argument("delta_basis: truncation must be positive");
  const int d = truth.support.size();
  DeltaBasisResult out;
  if (d == 0) return out;
  if (d > 3) throw std::invalid_argument("delta_basis: supports up to 3 active coordinates");
  if (d == 3) quad_nodes = std::min(quad_nodes, 96);

  std::vector<double> nodes, weights;
  gauss_legendre_01(quad_nodes, &nodes, &weights);
  const int nq = quad_nodes;
  const int kk = trunc + 1;

  // weighted basis matrix: ew[k][q] = e_k(node_q) * w_q
  std::vector<std::vector<double>> ew(kk, std::vector<double>(nq));
  for (int k = 0; k < kk; ++k) {
    for (int q = 0; q < nq; ++q) ew[k][q] = basis_e(k, nodes[q]) * weights[q];
  }

  // f on the tensor grid of the active coordinates (inactive ones integrate
  // out under the product design; pinned at 1/2)
  std::vector<double> x(truth.p, 0.5);
  const auto& active = truth.support.indices();
  double norm_sq = 0.0;

  std::vector<double> coeffs;  // flattened [k1][k2][k3]
  if (d == 1) {
    std::vector<double> fv(nq);
    for (int q = 0; q < nq; ++q) {
      x[active[0] - 1] = nodes[q];
      fv[q] = truth.f(x);
      norm_sq += weights[q] * fv[q] * fv[q];
    }
    coeffs.assign(kk, 0.0);
    for (int k = 0; k < kk; ++k) {
      for (int q = 0; q < nq; ++q) coeffs[k] += ew[k][q] * fv[q];
    }
  } else if (d == 2) {
    std::vector<double> fv(static_cast<std::size_t>(nq) * nq);
    for (int q1 = 0; q1 < nq; ++q1) {
      x[active[0] - 1] = nodes[q1];
      for (int q2 = 0; q2 < nq; ++q2) {
        x[active[1] - 1] = nodes[q2];
        double v = truth.f(x);
        fv[static_cast<std::size_t>(q1) * nq + q2] = v;
        norm_sq += weights[q1] * weights[q2] * v * v;
      }
    }
    // T[k1][q2] = sum_q1 ew[k1][q1] f[q1][q2]; C[k1][k2] = sum_q2 T ew
    std::vector<double> t(static_cast<std::size_t>(kk) * nq, 0.0);
    for (int k1 = 0; k1 < kk; ++k1) {
      for (int q1 = 0; q1 < nq; ++q1) {
        double w = ew[k1][q1];
        const double* row = &fv[static_cast<std::size_t>(q1) * nq];
        double* dst = &t[static_cast<std::size_t>(k1) * nq];
        for (int q2 = 0; q2 < nq; ++q2) dst[q2] += w * row[q2];
      }
    }
    coeffs.assign(static_cast<std::size_t>(kk) * kk, 0.0);
    for (int k1 = 0; k1 < kk; ++k1) {
      for (int k2 = 0; k2 < kk; ++k2) {
        double s = 0.0;
        const double* row = &t[static_cast<std::size_t>(k1) * nq];
        for (int q2 = 0; q2 < nq; ++q2) s += row[q2] * ew[k2][q2];
        coeffs[static_cast<std::size_t>(k1) * kk + k2] = s;
      }
    }
  } else {  // d == 3
    std::vector<double> fv(static_cast<std::size_t>(nq) * nq * nq);
    for (int q1 = 0; q1 < nq; ++q1) {
      x[active[0] - 1] = nodes[q1];
      for (int q2 = 0; q2 < nq; ++q2) {
        x[active[1] - 1] = nodes[q2];
        for (int q3 = 0; q3 < nq; ++q3) {
          x[active[2] - 1] = nodes[q3];
          double v = truth.f(x);
          fv[(static_cast<std::size_t>(q1) * nq + q2) * nq + q3] = v;
          norm_sq += weights[q1] * weights[q2] * weights[q3] * v * v;
        }
      }
    }
    // contract axis 3, then 2, then 1
    std::vector<double> t3(static_cast<std::size_t>(nq) * nq * kk, 0.0);
    for (int q1 = 0; q1 < nq; ++q1) {
      for (int q2 = 0; q2 < nq; ++q2) {
        const double* row = &fv[(static_cast<std::size_t>(q1) * nq + q2) * nq];
        double* dst = &t3[(static_cast<std::size_t>(q1) * nq + q2) * kk];
        for (int k3 = 0; k3 < kk; ++k3) {
          double s = 0.0;
          for (int q3 = 0; q3 < nq; ++q3) s += row[q3] * ew[k3][q3];
          dst[k3] = s;
        }
      }
    }
    std::vector<double> t2(static_cast<std::size_t>(nq) * kk * kk, 0.0);
    for (int q1 = 0; q1 < nq; ++q1) {
      for (int k2 = 0; k2 < kk; ++k2) {
        for (int q2 = 0; q2 < nq; ++q2) {
          double w = ew[k2][q2];
          const double* row = &t3[(static_cast<std::size_t>(q1) * nq + q2) * kk];
          double* dst = &t2[(static_cast<std::size_t>(q1) * kk + k2) * kk];
          for (int k3 = 0; k3 < kk; ++k3) dst[k3] += w * row[k3];
        }
      }
    }
    coeffs.assign(static_cast<std::size_t>(kk) * kk * kk, 0.0);
    for (int k1 = 0; k1 < kk; ++k1) {
      for (int q1 = 0; q1 < nq; ++q1) {
        double w = ew[k1][q1];
        const double* src = &t2[static_cast<std::size_t>(q1) * kk * kk];
        double* dst = &coeffs[static_cast<std::size_t>(k1) * kk * kk];
        for (int r = 0; r < kk * kk; ++r) dst[r] += w * src[r];
      }
    }
  }

  out.per_coordinate_sq.assign(d, 0.0);
  double captured = 0.0;
  std::vector<int> v(d, 0);
  for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
    double c2 = coeffs[flat] * coeffs[flat];
    captured += c2;
    for (int c = 0; c < d; ++c) {
      if (v[c] != 0) out.per_coordinate_sq[c] += c2;
    }
    int c = d - 1;  // last axis fastest in the flattened layout
    while (c >= 0 && ++v[c] == kk) v[c--] = 0;
  }
  out.delta_sq = *std::min_element(out.per_coordinate_sq.begin(), out.per_coordinate_sq.end());
  out.delta = std::sqrt(std::max(0.0, out.delta_sq));
  out.parseval_tail = std::max(0.0, norm_sq - captured);
  return out;
}

DeltaMcResult delta_mc(const TruthSpec& truth, std::size_t n_outer, std::size_t n_inner,
                       std::uint64_t seed) {
  if (n_outer < 100 || n_inner < 100) {
    throw std::invalid_argument("delta_mc: outer and inner counts must be at least 100");
  }
  const int d = truth.support.size();
  DeltaMcResult out;
  if (d == 0) return out;
  const auto& active = truth.support.indices();
  out.per_coordinate_sq.assign(d, 0.0);
  out.per_coordinate_se.assign(d, 0.0);
  Rng rng(seed);
  std::vector<double> x(truth.p, 0.0);
  std::vector<double> inner_vals(n_inner);
  for (int c = 0; c < d; ++c) {
    const int coord = active[c] - 1;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t o = 0; o < n_outer; ++o) {
      for (int cc = 0; cc < truth.p; ++cc) x[cc] = rng.uniform();
      double im = 0.0, im2 = 0.0;
      for (std::size_t i = 0; i < n_inner; ++i) {
        x[coord] = rng.uniform();
        double v = truth.f(x);
        im += v;
        im2 += v * v;
      }
      double mean = im / static_cast<double>(n_inner);
      double var = (im2 - static_cast<double>(n_inner) * mean * mean) /
                   static_cast<double>(n_inner - 1);
      sum += var;
      sumsq += var * var;
    }
    double mean_var = sum / static_cast<double>(n_outer);
    double var_of_var =
        std::max(0.0, sumsq / static_cast<double>(n_outer) - mean_var * mean_var);
    out.per_coordinate_sq[c] = mean_var;
    out.per_coordinate_se[c] = std::sqrt(var_of_var / static_cast<double>(n_outer));
  }
  std::size_t arg = 0;
  for (std::size_t c = 1; c < out.per_coordinate_sq.size(); ++c) {
    if (out.per_coordinate_sq[c] < out.per_coordinate_sq[arg]) arg = c;
  }
  out.delta_sq = out.per_coordinate_sq[arg];
  out.se = out.per_coordinate_se[arg];
  out.delta = std::sqrt(std::max(0.0, out.delta_sq));
  return out;
}

bool kl_ball_member(const std::vector<double>& theta_vals,
                    const std::vector<double>& theta_star_vals, double sigma, double eps) {
  if (theta_vals.size() != theta_star_vals.size()) {
    throw std::invalid_argument("kl_ball_member: value vectors differ in length");
  }
  const double n = static_cast<double>(theta_vals.size());
  double s = 0.0;
  for (std::size_t i = 0; i < theta_vals.size(); ++i) {
    double d = theta_star_vals[i] - theta_vals[i];
    s += d * d;
  }
  double kl_d = s / (2.0 * sigma * sigma);
  double v = s / (sigma * sigma);
  double bound = n * eps * eps;
  return kl_d <= bound && v <= bound;
}

ComplexityProfile::ComplexityProfile(const PriorFunctionSampler& sampler,
                                     const std::vector<double>& theta_star_vals, double sigma,
                                     std::size_t n_mc, std::uint64_t seed)
    : theta_star_(theta_star_vals), sigma_(sigma), n_(static_cast<int>(theta_star_vals.size())) {
  if (n_mc < 1000) throw std::invalid_argument("ComplexityProfile: n_mc must be at least 1000");
  Rng rng(seed);
  max_eps_.reserve(n_mc);
  for (std::size_t i = 0; i < n_mc; ++i) {
    std::vector<double> draw = sampler(rng);
    if (draw.size() != theta_star_.size()) {
      throw std::invalid_argument("ComplexityProfile: sampler length mismatch");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < draw.size(); ++k) {
      double d = theta_star_[k] - draw[k];
      s += d * d;
    }
    // member of the eps ball iff n eps^2 >= V = s / sigma^2 (V binds; D is
    // half of V for Gaussian regression)
    max_eps_.push_back(std::sqrt(s / (sigma_ * sigma_ * n_)));
  }
  std::sort(max_eps_.begin(), max_eps_.end());
}

ComplexityEstimate ComplexityProfile::at(double eps) const {
  ComplexityEstimate est;
  est.eps = eps;
  est.n = n_;
  est.draws = max_eps_.size();
  auto it = std::upper_bound(max_eps_.begin(), max_eps_.end(), eps);
  double hits = static_cast<double>(it - max_eps_.begin());
  double n_mc = static_cast<double>(max_eps_.size());
  est.mass = hits / n_mc;
  est.mass_se = std::sqrt(std::max(0.0, est.mass * (1.0 - est.mass)) / n_mc);
  double floor = 1.0 / n_mc;
  est.censored = est.mass < floor || hits == 0.0;
  est.complexity = -std::log(std::max(est.mass, floor)) / static_cast<double>(n_);
  return est;
}

std::vector<ComplexityEstimate> ComplexityProfile::on_grid(
    const std::vector<double>& eps_grid) const {
  std::vector<ComplexityEstimate> out;
  out.reserve(eps_grid.size());
  for (double e : eps_grid) out.push_back(at(e));
  return out;
}

ComplexityEstimate local_complexity(const PriorFunctionSampler& sampler,
                                    const std::vector<double>& theta_star_vals, double sigma,
                                    double eps, std::size_t n_mc, std::uint64_t seed) {
  ComplexityProfile profile(sampler, theta_star_vals, sigma, n_mc, seed);
  return profile.at(eps);
}

double critical_radius(const PriorFunctionSampler& sampler,
                       const std::vector<double>& theta_star_vals, double sigma, double alpha,
                       std::size_t n_mc, std::uint64_t seed, double eps_lo, double eps_hi) {
  if (alpha <= 0.0 || alpha >= 1.0) {
    throw std::invalid_argument("critical_radius: alpha must lie strictly inside (0,1)");
  }
  ComplexityProfile profile(sampler, theta_star_vals, sigma, n_mc, seed);
  auto g = [&](double eps) { return profile.at(eps).complexity - alpha * eps * eps; };
  if (profile.at(eps_lo).complexity <= 0.0) return eps_lo;  // point-mass-like prior
  double glo = g(eps_lo), ghi = g(eps_hi);
  if (glo <= 0.0 || ghi >= 0.0) {
    throw std::runtime_error("critical_radius: no sign change in bracket [" +
                             std::to_string(eps_lo) + ", " + std::to_string(eps_hi) +
                             "]; g(lo)=" + std::to_string(glo) + " g(hi)=" + std::to_string(ghi));
  }
  double lo = eps_lo, hi = eps_hi;
  while (hi - lo > 1e-3) {
    double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace fracbayes
