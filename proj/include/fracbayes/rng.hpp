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

#ifndef FRACBAYES_RNG_HPP_
#define FRACBAYES_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace fracbayes {

// Deterministic RNG with self-contained samplers. All distributions are
// implemented on top of raw mt19937_64 words so that identical seeds give
// bit-identical streams independent of the standard library in use
// (std::normal_distribution and friends are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { seed_state(seed); }

  std::uint64_t next_u64() {
    if (idx_ >= kN) twist();
    std::uint64_t x = state_[idx_++];
    x ^= (x >> 29) & 0x5555555555555555ULL;
    x ^= (x << 17) & 0x71D67FFFEDA60000ULL;
    x ^= (x << 37) & 0xFFF7EEE000000000ULL;
    x ^= (x >> 43);
    return x;
  }

  // Uniform on [0,1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1): rejects exact zero.
  double uniform_pos() {
    double u;
    do {
      u = uniform();
    } while (u <= 0.0);
    return u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // index in {0,...,n-1}
  std::size_t uniform_index(std::size_t n) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
  }

  // Standard normal via Box-Muller (cached spare deliberately omitted so the
  // stream consumption per call is fixed: two uniforms per normal).
  double normal() {
    double u1 = uniform_pos();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mu, double sd) { return mu + sd * normal(); }

  double exponential(double rate = 1.0) { return -std::log(uniform_pos()) / rate; }

  // Laplace with density (rate/2) exp(-rate*|x-mu|).
  double laplace(double mu, double rate) {
    double u = uniform() - 0.5;
    double s = (u < 0.0) ? -1.0 : 1.0;
    return mu - s * std::log(1.0 - 2.0 * std::fabs(u)) / rate;
  }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1. Scale 1.
  double gamma(double shape) {
    if (shape <= 0.0) throw std::invalid_argument("gamma: shape must be positive");
    if (shape < 1.0) {
      double u = uniform_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      double u = uniform_pos();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Derive an independent child stream; mixing is splitmix64-style so that
  // (seed, tag) pairs never collide with plain increments of the seed.
  Rng child(std::uint64_t tag) const { return Rng(mix(seed_, tag)); }

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL + b * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr int kN = 312;
  static constexpr int kM = 156;
  static constexpr std::uint64_t kMatrixA = 0xB5026F5AA96619E9ULL;
  static constexpr std::uint64_t kUpperMask = 0xFFFFFFFF80000000ULL;
  static constexpr std::uint64_t kLowerMask = 0x7FFFFFFFULL;

  void seed_state(std::uint64_t seed) {
    seed_ = seed;
    state_[0] = seed;
    for (int i = 1; i < kN; ++i) {
      state_[i] = 6364136223846793005ULL * (state_[i - 1] ^ (state_[i - 1] >> 62)) +
                  static_cast<std::uint64_t>(i);
    }
    idx_ = kN;
  }

  void twist() {
    for (int i = 0; i < kN; ++i) {
      std::uint64_t x = (state_[i] & kUpperMask) | (state_[(i + 1) % kN] & kLowerMask);
      std::uint64_t x_a = x >> 1;
      if (x & 1ULL) x_a ^= kMatrixA;
      state_[i] = state_[(i + kM) % kN] ^ x_a;
    }
    idx_ = 0;
  }

  std::uint64_t seed_ = 0;
  std::uint64_t state_[kN];
  int idx_ = kN;
};

// Seed for grid cell (i, j) replicate r under a master seed. Streams for
// distinct cells never coincide (splitmix64 chain).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j,
                                 std::uint64_t r) {
  return Rng::mix(Rng::mix(Rng::mix(master, i), j), r);
}

}  // namespace fracbayes

#endif  // FRACBAYES_RNG_HPP_
