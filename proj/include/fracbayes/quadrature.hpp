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

#ifndef FRACBAYES_QUADRATURE_HPP_
#define FRACBAYES_QUADRATURE_HPP_

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracbayes {

struct QuadratureFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Adaptive Gauss-Kronrod (G7/K15) panel integrator. Panels are split until
// the K15-G7 error estimate meets the absolute tolerance; the panel budget
// guards against non-integrable inputs.
//
// integrate() is the workhorse behind every quadrature-backed estimator in
// this library, so it is kept allocation-light and recursion-free.
class GaussKronrod {
 public:
  struct Result {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
  };

  static Result integrate(const std::function<double(double)>& f, double lo, double hi,
                          double abs_tol = 1e-9, std::size_t max_panels = 40000) {
    struct Panel {
      double lo, hi, value, err;
    };
    if (!(hi > lo)) return {0.0, 0.0, 0};
    std::vector<Panel> stack;
    auto eval = [&](double a, double b) {
      double v, e;
      panel(f, a, b, &v, &e);
      return Panel{a, b, v, e};
    };
    // Seed with a handful of panels; oscillatory integrands benefit from not
    // starting as one giant interval.
    const int seed_panels = 8;
    double total = 0.0, total_err = 0.0;
    for (int i = 0; i < seed_panels; ++i) {
      double a = lo + (hi - lo) * static_cast<double>(i) / seed_panels;
      double b = lo + (hi - lo) * static_cast<double>(i + 1) / seed_panels;
      stack.push_back(eval(a, b));
    }
    std::size_t used = seed_panels;
    std::vector<Panel> done;
    while (!stack.empty()) {
      Panel p = stack.back();
      stack.pop_back();
      if (p.err <= abs_tol * (p.hi - p.lo) / (hi - lo) || (p.hi - p.lo) < 1e-14 * (hi - lo)) {
        done.push_back(p);
        continue;
      }
      if (used + 2 > max_panels) {
        throw QuadratureFailure("quadrature: panel budget exhausted on [" + std::to_string(p.lo) +
                                "," + std::to_string(p.hi) + "], err=" + std::to_string(p.err));
      }
      double mid = 0.5 * (p.lo + p.hi);
      stack.push_back(eval(p.lo, mid));
      stack.push_back(eval(mid, p.hi));
      used += 2;
    }
    for (const Panel& p : done) {
      total += p.value;
      total_err += p.err;
    }
    return {total, total_err, used};
  }

 private:
  static void panel(const std::function<double(double)>& f, double a, double b, double* value,
                    double* err) {
    // K15 nodes/weights on [-1,1]; the odd-index nodes form the embedded G7.
    static const double xk[15] = {
        -0.991455371120813, -0.949107912342759, -0.864864423359769, -0.741531185599394,
        -0.586087235467691, -0.405845151377397, -0.207784955007898, 0.0,
        0.207784955007898,  0.405845151377397,  0.586087235467691,  0.741531185599394,
        0.864864423359769,  0.949107912342759,  0.991455371120813};
    static const double wk[15] = {
        0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
        0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728,
        0.204432940075298, 0.190350578064785, 0.169004726639267, 0.140653259715525,
        0.104790010322250, 0.063092092629979, 0.022935322010529};
    static const double wg[7] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                                 0.417959183673469, 0.381830050505119, 0.279705391489277,
                                 0.129484966168870};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double sk = 0.0, sg = 0.0;
    for (int i = 0; i < 15; ++i) {
      double fx = f(c + h * xk[i]);
      sk += wk[i] * fx;
      if (i % 2 == 1) sg += wg[i / 2] * fx;
    }
    *value = sk * h;
    *err = std::fabs((sk - sg) * h);
  }
};

inline double integrate(const std::function<double(double)>& f, double lo, double hi,
                        double abs_tol = 1e-9) {
  return GaussKronrod::integrate(f, lo, hi, abs_tol).value;
}

// Gauss-Legendre nodes/weights on [0,1], computed by Newton iteration on the
// Legendre polynomial. Used for the tensor-product quadratures where a fixed
// rule beats adaptivity.
inline void gauss_legendre_01(int n, std::vector<double>* nodes, std::vector<double>* weights) {
  nodes->assign(n, 0.0);
  weights->assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    pp = n * (x * p1 - p0) / (x * x - 1.0);
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    (*nodes)[i] = 0.5 * (1.0 - x);
    (*nodes)[n - 1 - i] = 0.5 * (1.0 + x);
    (*weights)[i] = 0.5 * w;
    (*weights)[n - 1 - i] = 0.5 * w;
  }
}

}  // namespace fracbayes

#endif  // FRACBAYES_QUADRATURE_HPP_
