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

#include "fracbayes/kernel_spectra.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "fracbayes/quadrature.hpp"

namespace fracbayes {

namespace {

constexpr double kPi = 3.14159265358979323846;

double matern_profile(double a, double nu, double t) {
  double r = std::fabs(t);
  if (r < 1e-10) return 1.0;
  double s = std::sqrt(2.0 * nu) * a * r;
  if (nu == 0.5) return std::exp(-s);
  if (nu == 1.5) return (1.0 + s) * std::exp(-s);
  if (nu == 2.5) return (1.0 + s + s * s / 3.0) * std::exp(-s);
  double v = std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(s, nu) * std::cyl_bessel_k(nu, s);
  return std::min(v, 1.0);
}

}  // namespace

StationaryKernel squared_exponential_kernel(double a) {
  if (a <= 0.0) throw std::invalid_argument("squared exponential: a must be positive");
  StationaryKernel k;
  k.family = KernelFamily::kSquaredExponential;
  k.inverse_bandwidth = a;
  k.profile = [a](double t) { return std::exp(-a * a * t * t); };
  k.name = "se(a=" + std::to_string(a) + ")";
  return k;
}

StationaryKernel matern_kernel(double a, double nu) {
  if (a <= 0.0 || nu <= 0.0) throw std::invalid_argument("matern: a and nu must be positive");
  if (std::isinf(nu)) return squared_exponential_kernel(a);
  StationaryKernel k;
  k.family = KernelFamily::kMatern;
  k.inverse_bandwidth = a;
  k.smoothness = nu;
  k.profile = [a, nu](double t) { return matern_profile(a, nu, t); };
  k.name = "matern(a=" + std::to_string(a) + ",nu=" + std::to_string(nu) + ")";
  return k;
}

StationaryKernel user_kernel(std::function<double(double)> profile, std::string name) {
  StationaryKernel k;
  k.family = KernelFamily::kUserDefined;
  k.profile = std::move(profile);
  k.name = std::move(name);
  return k;
}

std::string EigenSystem::eigenfunction_id(std::size_t index) {
  if (index == 0) return "const";
  std::size_t j = (index + 1) / 2;
  return (index % 2 == 1) ? "sin(" + std::to_string(j) + "pi x)"
                          : "cos(" + std::to_string(j) + "pi x)";
}

EigenSystem eigensystem(const StationaryKernel& kernel, std::size_t m) {
  if (m < 1) throw std::invalid_argument("eigensystem: m must be at least 1");
  EigenSystem out;
  out.truncation = m;
  out.values.reserve(m);
  out.fourier_mode.reserve(m);
  auto cos_coeff = [&](int j) {
    return integrate([&](double t) { return kernel(t) * std::cos(j * kPi * t); }, -1.0, 1.0,
                     1e-11);
  };
  out.raw_values.reserve(m);
  for (std::size_t idx = 0; idx < m; ++idx) {
    int j = static_cast<int>((idx + 1) / 2);
    double v;
    if (idx == 0) {
      v = cos_coeff(0);
    } else if (idx % 2 == 1) {
      v = cos_coeff(j);
    } else {
      // pair member shares the sine value exactly by construction
      v = out.raw_values.back();
    }
    out.raw_values.push_back(v);
    if (v < 0.0) {
      ++out.clamped_count;
      v = 0.0;
    }
    out.values.push_back(v);
    out.fourier_mode.push_back(j);
  }
  return out;
}

double spectral_density(const StationaryKernel& kernel, double psi) {
  const double a = kernel.inverse_bandwidth;
  switch (kernel.family) {
    case KernelFamily::kSquaredExponential:
      return std::sqrt(kPi) / a * std::exp(-psi * psi / (4.0 * a * a));
    case KernelFamily::kMatern: {
      const double nu = kernel.smoothness;
      auto shape = [&](double u) { return std::pow(1.0 + u * u / (a * a), -(nu + 0.5)) / a; };
      // Normalize numerically so that int h = k(0) = 1; substitute
      // u = a tan(theta) to integrate over a compact interval.
      double mass = integrate(
          [&](double th) {
            double c = std::cos(th);
            double u = a * std::tan(th);
            return shape(u) * a / (c * c);
          },
          -0.5 * kPi + 1e-12, 0.5 * kPi - 1e-12, 1e-10);
      return shape(psi) / mass;
    }
    case KernelFamily::kUserDefined:
      throw std::invalid_argument("spectral_density: unsupported family (user-defined kernel)");
  }
  throw std::logic_error("unreachable");
}

double asymptotic_eigenvalue(const StationaryKernel& kernel, int j) {
  if (j < 0) throw std::out_of_range("asymptotic_eigenvalue: j must be nonnegative");
  const double a = kernel.inverse_bandwidth;
  switch (kernel.family) {
    case KernelFamily::kSquaredExponential:
      if (static_cast<double>(j) > a * a) {
        throw std::out_of_range(
            "asymptotic_eigenvalue: squared-exponential comparator is stated for j <= a^2 only");
      }
      if (j == 0) return 1.0 / a;
      return std::exp(-static_cast<double>(j) * j / (a * a)) / a;
    case KernelFamily::kMatern:
      if (j == 0) return 1.0 / a;
      return std::pow(1.0 + static_cast<double>(j) * j / (a * a), -(kernel.smoothness + 0.5)) / a;
    case KernelFamily::kUserDefined:
      throw std::invalid_argument("asymptotic_eigenvalue: unsupported family");
  }
  throw std::logic_error("unreachable");
}

double tensor_eigenvalue(const EigenSystem& eig, const TensorMultiIndex& v) {
  double prod = 1.0;
  for (const auto& [coord, idx] : v.v) {
    if (idx >= eig.values.size()) {
      throw std::out_of_range("tensor_eigenvalue: coordinate " + std::to_string(coord) +
                              " indexes beyond truncation " + std::to_string(eig.values.size()));
    }
    prod *= eig.values[idx];
  }
  return prod;
}

double entropy_lower_bound(double a, int d, double eps, double constant) {
  if (a < 2.0) throw std::domain_error("entropy_lower_bound: requires a >= 2");
  if (d < 1) throw std::domain_error("entropy_lower_bound: dimension must be positive");
  double ceiling = std::pow(a, -0.5 * d);
  if (!(eps > 0.0) || eps >= ceiling) {
    throw std::domain_error("entropy_lower_bound: eps must lie in (0, a^{-d/2}); got eps=" +
                            std::to_string(eps) + ", a^{-d/2}=" + std::to_string(ceiling));
  }
  double logterm = std::log(1.0 / (eps * std::pow(a, 0.5 * d)));
  return constant * std::pow(a, d) / std::pow(static_cast<double>(d), d) *
         std::pow(logterm, 0.5 * (d + 2));
}

std::vector<double> gram_eigen_oracle(const StationaryKernel& kernel, std::size_t grid_size) {
  if (grid_size < 16) throw std::invalid_argument("gram_eigen_oracle: grid_size must be >= 16");
  const auto n = static_cast<Eigen::Index>(grid_size);
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      double xi = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      double xj = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      double v = kernel(xi - xj);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gram_eigen_oracle: eigensolver failed to converge");
  }
  std::vector<double> out(grid_size);
  for (std::size_t i = 0; i < grid_size; ++i) {
    out[i] = solver.eigenvalues()(static_cast<Eigen::Index>(grid_size - 1 - i)) /
             static_cast<double>(grid_size);
  }
  return out;
}

}  // namespace fracbayes
