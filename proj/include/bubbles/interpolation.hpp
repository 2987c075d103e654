#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bubbles::interp {

struct Knot {
  double x = 0.0;
  double sigma = 0.0;
};

/// Deterministic positive curve on the bounded interval [x_1, x_M]. Queries
/// outside the domain or yielding a non-positive value raise; raw() skips
/// both checks for plot emission.
class BoundedCurve {
 public:
  BoundedCurve(std::vector<Knot> knots, std::function<double(double)> eval,
               std::string method);

  double operator()(double x) const;
  double raw(double x) const { return eval_(x); }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  const std::vector<Knot>& knots() const { return knots_; }
  const std::string& method() const { return method_; }

 private:
  std::vector<Knot> knots_;
  std::function<double(double)> eval_;
  std::string method_;
  double lo_;
  double hi_;
};

/// Natural cubic spline (zero second derivative at the endpoints) through
/// ascending knots with positive values. Two knots give the linear
/// interpolant.
BoundedCurve cubic_spline(const std::vector<Knot>& knots);

/// Exact kernel interpolant with the first-order Sobolev kernel
/// K(x, y) = exp(-tau * |x - y| / D) / (2 tau), D the knot span, so tau
/// counts decay lengths across the observed interval. Coefficients solve the
/// Gram system with zero regularization; the curve passes through all knots.
BoundedCurve rkhs_interpolate(const std::vector<Knot>& knots, double tau);

/// Samples the curve on a uniform mesh and aborts with a diagnostic if any
/// value is non-positive.
void check_positive(const BoundedCurve& curve, int mesh = 512);

}  // namespace bubbles::interp
