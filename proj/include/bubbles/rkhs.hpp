#pragma once

#include <tuple>
#include <vector>

#include "bubbles/interpolation.hpp"

namespace bubbles::rkhs {

/// Euler Beta function, positive arguments.
double beta_fn(double a, double b);

/// Terminating Gauss hypergeometric sum 2F1(1 - n, m + 1; n + m + 1; z) for
/// integer n >= 1 and z in [0, 1]; the series has exactly n terms.
double hyp2f1_terminating(int n, double m, double z);

/// Reproducing kernel of the weighted smoothness space:
///   q(x, y) = n^2 B(m+1, n) (x v y)^-(m+1) 2F1(1-n, m+1; n+m+1, (x^y)/(x v y))
/// symmetric and strictly positive for positive arguments.
double kernel_q(int n, double m, double x, double y);

/// Tail-extrapolation model for f = 1/sigma^2: f(x) = sum_i c_i q(x_i, x),
/// which matches the knot values exactly and decays like x^-(m+1).
struct ExtrapolationModel {
  int n = 1;         ///< smoothness index
  double m = 1.0;    ///< asymptotic weight exponent
  std::vector<double> knots;   ///< ascending positive x_i
  std::vector<double> values;  ///< f_i = 1/sigma^2(x_i), positive
  std::vector<double> coeffs;  ///< kernel coefficients c_i

  double coeff_sum() const;
};

/// Solves the Gram system sum_i c_i q(x_i, x_k) = f_k by a symmetric
/// factorization with one refinement step. Errors on duplicate knots, a
/// non-positive-definite Gram, a condition estimate above 1e14, or a
/// residual above 1e-9 relative.
std::vector<double> solve_coefficients(const std::vector<double>& knots,
                                       const std::vector<double>& values,
                                       int n, double m);

ExtrapolationModel make_model(std::vector<double> knots,
                              std::vector<double> values, int n, double m);

/// f(x) = sum c_i q(x_i, x); may be non-positive for a bad model.
double eval_f(const ExtrapolationModel& model, double x);

struct Extrapolated {
  double f = 0.0;
  double sigma = 0.0;
};

/// Returns (f(x), sigma(x) = f(x)^(-1/2)); errors when f(x) <= 0.
Extrapolated eval_extrapolated(const ExtrapolationModel& model, double x);

/// lim_{x->inf} x^(m+1) f(x) = n^2 B(m+1, n) sum c_i; errors when the
/// coefficient sum is not positive.
double asymptotic_limit(const ExtrapolationModel& model);

struct ScanRow {
  double m = 0.0;
  double objective = 0.0;  ///< +inf when infeasible
  bool feasible = false;
};

struct MSearchResult {
  double m = 0.0;
  double objective = 0.0;
  ExtrapolationModel model;
  std::vector<ScanRow> scan;  ///< coarse-scan table, ascending m
};

/// Picks m minimizing the L2 distance between sigma_m = f_m^(-1/2) and
/// sigma_b over the last third of the bounded interval (uniform mesh
/// trapezoid rule), via a 50-point coarse scan followed by golden-section
/// refinement. Candidates whose f is non-positive on the comparison mesh or
/// on [x_M, 10 x_M], whose coefficient sum is not positive, or whose Gram
/// solve fails are rejected as infeasible. Ties break toward smaller m.
MSearchResult optimize_m(const std::vector<double>& knots,
                         const std::vector<double>& values, int n,
                         const interp::BoundedCurve& sigma_b, double m_lo,
                         double m_hi, int mesh = 200);

}  // namespace bubbles::rkhs
