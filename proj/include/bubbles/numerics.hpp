#pragma once

#include <functional>

namespace bubbles::num {

/// Inverse CDF of the standard normal distribution, p in (0, 1).
/// Rational initial guess refined with one Halley step on erfc, accurate to
/// full double precision away from the extreme tails.
double normal_quantile(double p);

/// Adaptive Simpson quadrature of f over [a, b] with relative tolerance
/// rel_tol. The integrand must be finite on [a, b]; exceptions it throws
/// propagate to the caller.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-10);

}  // namespace bubbles::num
