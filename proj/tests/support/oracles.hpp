#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "bubbles/rkhs.hpp"

namespace oracles {

// 20-point Gauss-Legendre rule on [-1, 1].
inline const std::vector<double>& gl20_nodes() {
  static const std::vector<double> nodes = {
      -0.9931285991850949, -0.9639719272779138, -0.9122344282513259,
      -0.8391169718222188, -0.7463319064601508, -0.6360536807265150,
      -0.5108670019508271, -0.3737060887154195, -0.2277858511416451,
      -0.0765265211334973, 0.0765265211334973,  0.2277858511416451,
      0.3737060887154195,  0.5108670019508271,  0.6360536807265150,
      0.7463319064601508,  0.8391169718222188,  0.9122344282513259,
      0.9639719272779138,  0.9931285991850949};
  return nodes;
}

inline const std::vector<double>& gl20_weights() {
  static const std::vector<double> weights = {
      0.0176140071391521, 0.0406014298003869, 0.0626720483341091,
      0.0832767415767048, 0.1019301198172404, 0.1181945319615184,
      0.1316886384491766, 0.1420961093183820, 0.1491729864726037,
      0.1527533871307258, 0.1527533871307258, 0.1491729864726037,
      0.1420961093183820, 0.1316886384491766, 0.1181945319615184,
      0.1019301198172404, 0.0832767415767048, 0.0626720483341091,
      0.0406014298003869, 0.0176140071391521};
  return weights;
}

inline double gl20(const std::function<double(double)>& f, double a, double b) {
  const auto& xs = gl20_nodes();
  const auto& ws = gl20_weights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += ws[i] * f(mid + half * xs[i]);
  }
  return acc * half;
}

// Improper integral on [a, inf) approximated by geometric panels up to
// `cut` plus a caller-supplied analytic remainder.
inline double geometric_panels(const std::function<double(double)>& f,
                               double a, double cut) {
  double lo = a;
  double acc = 0.0;
  while (lo < cut) {
    const double hi = std::min(lo * 2.0, cut);
    acc += gl20(f, lo, hi);
    lo = hi;
  }
  return acc;
}

// Quadrature form of the extrapolation kernel:
//   q(x, y) = n^2 * Integral_{x v y}^{inf} [(v-x)(v-y)]^(n-1) v^(-2n-m) dv,
// truncated at v = 1e6 with the exact power-law remainder (n = 1, 2).
inline double kernel_q_quadrature(int n, double m, double x, double y) {
  if (n != 1 && n != 2) {
    throw std::invalid_argument("kernel oracle supports n = 1, 2");
  }
  const double b = std::max(x, y);
  const double cut = 1e6;
  auto integrand = [&](double v) {
    double base = 1.0;
    if (n == 2) base = (v - x) * (v - y);
    return base * std::pow(v, -(2.0 * n + m));
  };
  double value = geometric_panels(integrand, b, cut);
  double tail = std::pow(cut, -(m + 1.0)) / (m + 1.0);
  if (n == 2) {
    tail -= (x + y) * std::pow(cut, -(m + 2.0)) / (m + 2.0);
    tail += x * y * std::pow(cut, -(m + 3.0)) / (m + 3.0);
  }
  return static_cast<double>(n) * n * (value + tail);
}

// <g, g>_{n,m} for g = q(x0, .) and n = 1, computed from the defining
// integral with a finite-difference derivative of the closed-form kernel.
inline double inner_product_quadrature_n1(double m, double x0) {
  auto dq = [&](double y) {
    const double h = std::min(1e-5 * y, 0.45 * (y - x0));
    return (bubbles::rkhs::kernel_q(1, m, x0, y + h) -
            bubbles::rkhs::kernel_q(1, m, x0, y - h)) /
           (2.0 * h);
  };
  auto integrand = [&](double y) {
    const double d = dq(y);
    return std::pow(y, m + 2.0) * d * d;
  };
  const double start = x0 * (1.0 + 1e-7);
  const double cut = 1e6 * x0;
  const double tail = std::pow(cut, -(m + 1.0)) / (m + 1.0);
  return geometric_panels(integrand, start, cut) + tail;
}

// Natural cubic spline via a dense full-pivot solve; independent of the
// library's Thomas-algorithm path.
inline double natural_spline_dense(const std::vector<double>& xs,
                                   const std::vector<double>& ys, double x) {
  const int n = static_cast<int>(xs.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  A(0, 0) = 1.0;
  A(n - 1, n - 1) = 1.0;
  for (int i = 1; i + 1 < n; ++i) {
    const double h0 = xs[i] - xs[i - 1];
    const double h1 = xs[i + 1] - xs[i];
    A(i, i - 1) = h0;
    A(i, i) = 2.0 * (h0 + h1);
    A(i, i + 1) = h1;
    rhs(i) = 6.0 * ((ys[i + 1] - ys[i]) / h1 - (ys[i] - ys[i - 1]) / h0);
  }
  Eigen::VectorXd mom = A.fullPivLu().solve(rhs);
  int hi = 1;
  while (hi + 1 < n && xs[hi] < x) ++hi;
  const int lo = hi - 1;
  const double h = xs[hi] - xs[lo];
  const double a = (xs[hi] - x) / h;
  const double b2 = (x - xs[lo]) / h;
  return a * ys[lo] + b2 * ys[hi] +
         ((a * a * a - a) * mom(lo) + (b2 * b2 * b2 - b2) * mom(hi)) * h * h /
             6.0;
}

}  // namespace oracles
