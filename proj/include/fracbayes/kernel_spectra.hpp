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

#ifndef FRACBAYES_KERNEL_SPECTRA_HPP_
#define FRACBAYES_KERNEL_SPECTRA_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace fracbayes {

enum class KernelFamily { kSquaredExponential, kMatern, kUserDefined };

// One-dimensional stationary positive-definite kernel on [0,1], evaluated
// through its profile k(t) = K(x, x+t) for t in [-1,1]. Built-in families are
// normalized to k(0) = 1 (unit variance).
struct StationaryKernel {
  KernelFamily family = KernelFamily::kUserDefined;
  double inverse_bandwidth = 1.0;  // a
  double smoothness = 0.0;         // nu, Matern only; infinity handled as SE
  std::function<double(double)> profile;
  std::string name;

  double operator()(double t) const { return profile(t); }
};

// K^a(x,y) = exp(-a^2 (x-y)^2)
StationaryKernel squared_exponential_kernel(double a);
// Matern with inverse bandwidth a and smoothness nu; closed forms for
// nu in {1/2, 3/2, 5/2}, modified-Bessel evaluation otherwise.
StationaryKernel matern_kernel(double a, double nu);
StationaryKernel user_kernel(std::function<double(double)> profile, std::string name);

// Fourier eigensystem of a stationary kernel on [0,1]: eta_0 = int k dt over
// [-1,1] with eigenfunction 1; the paired values eta_{2j-1} = eta_{2j} =
// int k(t) cos(j pi t) dt with eigenfunctions sin(j pi x), cos(j pi x).
// Values are stored in the enumeration order 0, 1, 2, ...
struct EigenSystem {
  std::vector<double> values;     // length m, clamped at zero
  std::vector<double> raw_values;  // signed integrals before clamping
  std::vector<int> fourier_mode;  // mode j per entry (0 for the constant)
  std::size_t truncation = 0;
  int clamped_count = 0;  // negative integrals clamped to 0 in `values`

  // 0 -> constant, 2j-1 -> sin(j pi x), 2j -> cos(j pi x)
  static std::string eigenfunction_id(std::size_t index);
};

EigenSystem eigensystem(const StationaryKernel& kernel, std::size_t m);

// Closed-form spectral density of the built-in families. SE:
// (sqrt(pi)/a) exp(-psi^2 / (4 a^2)). Matern: C a^{-1} (1 + psi^2/a^2)^{-(nu+1/2)}
// with C fixed numerically so the total spectral mass equals k(0) = 1.
double spectral_density(const StationaryKernel& kernel, double psi);

// The comparator scale of the eigenvalue decay, without unknown constants.
// SE: a^{-1} e^{-j^2/a^2} for 0 <= j <= a^2; Matern: a^{-1} (1+j^2/a^2)^{-(nu+1/2)}.
double asymptotic_eigenvalue(const StationaryKernel& kernel, int j);

// Multi-index into a tensor-product eigensystem: coordinate -> enumeration
// index of the one-dimensional eigenvalue.
struct TensorMultiIndex {
  std::map<int, std::size_t> v;
};

// eta_v = prod_j eta_{v_j}; every coordinate must lie below the truncation.
double tensor_eigenvalue(const EigenSystem& eig, const TensorMultiIndex& v);

// Volume-argument lower bound on the RKHS covering entropy:
// C (a^d / d^d) [log(1/(eps a^{d/2}))]^{(d+2)/2}, valid for a >= 2 and
// eps in (0, a^{-d/2}).
double entropy_lower_bound(double a, int d, double eps, double constant = 1.0);

// Nystrom oracle: eigenvalues of the grid_size x grid_size Gram matrix on the
// uniform midpoint grid over [0,1], scaled by 1/grid_size and sorted
// descending. Converges to the Mercer eigenvalues of K on L2(Uniform[0,1]).
std::vector<double> gram_eigen_oracle(const StationaryKernel& kernel, std::size_t grid_size);

}  // namespace fracbayes

#endif  // FRACBAYES_KERNEL_SPECTRA_HPP_
