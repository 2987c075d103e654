#include "bubbles/numerics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bubbles::num {

namespace {

// Acklam's rational approximation to the inverse normal CDF.
double normal_quantile_approx(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
             c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
         q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct SimpsonCtx {
  const std::function<double(double)>& f;
  double rel_tol;
};

double simpson_rec(const SimpsonCtx& ctx, double a, double b, double fa,
                   double fm, double fb, double whole, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = ctx.f(lm);
  double frm = ctx.f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  double scale = std::max(std::abs(left + right), 1e-300);
  if (depth <= 0 || std::abs(err) <= 15.0 * ctx.rel_tol * scale) {
    return left + right + err / 15.0;
  }
  return simpson_rec(ctx, a, m, fa, flm, fm, left, depth - 1) +
         simpson_rec(ctx, m, b, fm, frm, fb, right, depth - 1);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
  }
  double x = normal_quantile_approx(p);
  // Halley refinement on erfc(-x/sqrt(2))/2 - p = 0.
  const double sqrt2 = std::sqrt(2.0);
  const double inv_sqrt2pi = 0.3989422804014327;
  double e = 0.5 * std::erfc(-x / sqrt2) - p;
  double u = e / (inv_sqrt2pi * std::exp(-0.5 * x * x));
  x = x - u / (1.0 + 0.5 * x * u);
  return x;
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
  if (a == b) return 0.0;
  SimpsonCtx ctx{f, rel_tol};
  double fa = f(a);
  double fb = f(b);
  double m = 0.5 * (a + b);
  double fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(ctx, a, b, fa, fm, fb, whole, 48);
}

}  // namespace bubbles::num
