#include "bubbles/interpolation.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace bubbles::interp {

namespace {

void validate_knots(const std::vector<Knot>& knots, std::size_t min_count) {
  if (knots.size() < min_count) {
    throw std::invalid_argument("interpolation needs at least " +
                                std::to_string(min_count) + " knots, got " +
                                std::to_string(knots.size()));
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i].sigma > 0.0) || !std::isfinite(knots[i].sigma)) {
      throw std::invalid_argument("non-positive sigma at knot " +
                                  std::to_string(i));
    }
    if (i > 0 && !(knots[i].x > knots[i - 1].x)) {
      throw std::invalid_argument("duplicate or non-ascending knot x at index " +
                                  std::to_string(i));
    }
  }
}

struct SplineData {
  std::vector<double> x, y, m;  // m: second derivatives at knots
};

double spline_eval(const SplineData& d, double x) {
  const auto& xs = d.x;
  std::size_t hi = std::upper_bound(xs.begin(), xs.end(), x) - xs.begin();
  hi = std::clamp<std::size_t>(hi, 1, xs.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = xs[hi] - xs[lo];
  const double a = (xs[hi] - x) / h;
  const double b = (x - xs[lo]) / h;
  return a * d.y[lo] + b * d.y[hi] +
         ((a * a * a - a) * d.m[lo] + (b * b * b - b) * d.m[hi]) * h * h / 6.0;
}

}  // namespace

BoundedCurve::BoundedCurve(std::vector<Knot> knots,
                           std::function<double(double)> eval,
                           std::string method)
    : knots_(std::move(knots)),
      eval_(std::move(eval)),
      method_(std::move(method)) {
  if (knots_.empty()) throw std::invalid_argument("BoundedCurve: no knots");
  lo_ = knots_.front().x;
  hi_ = knots_.back().x;
}

double BoundedCurve::operator()(double x) const {
  const double slack = 1e-12 * std::max(1.0, hi_ - lo_);
  if (x < lo_ - slack || x > hi_ + slack) {
    std::ostringstream msg;
    msg << "curve query x=" << x << " outside domain [" << lo_ << ", " << hi_
        << "]";
    throw std::domain_error(msg.str());
  }
  const double v = eval_(std::clamp(x, lo_, hi_));
  if (!(v > 0.0)) {
    std::ostringstream msg;
    msg << "non-positive interpolated volatility " << v << " at x=" << x;
    throw std::runtime_error(msg.str());
  }
  return v;
}

BoundedCurve cubic_spline(const std::vector<Knot>& knots) {
  validate_knots(knots, 2);
  const std::size_t n = knots.size();
  auto d = std::make_shared<SplineData>();
  d->x.resize(n);
  d->y.resize(n);
  d->m.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    d->x[i] = knots[i].x;
    d->y[i] = knots[i].sigma;
  }
  if (n > 2) {
    // Tridiagonal moment system, natural boundary (m_0 = m_{n-1} = 0),
    // solved with the Thomas algorithm.
    const std::size_t k = n - 2;
    std::vector<double> diag(k), off(k), rhs(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double h0 = d->x[i + 1] - d->x[i];
      const double h1 = d->x[i + 2] - d->x[i + 1];
      diag[i] = 2.0 * (h0 + h1);
      off[i] = h1;  // both super- and sub-diagonal by symmetry of the layout
      rhs[i] = 6.0 * ((d->y[i + 2] - d->y[i + 1]) / h1 -
                      (d->y[i + 1] - d->y[i]) / h0);
    }
    for (std::size_t i = 1; i < k; ++i) {
      const double sub = d->x[i + 1] - d->x[i];
      const double w = sub / diag[i - 1];
      diag[i] -= w * off[i - 1];
      rhs[i] -= w * rhs[i - 1];
    }
    d->m[k] = rhs[k - 1] / diag[k - 1];
    for (std::size_t i = k - 1; i >= 1; --i) {
      d->m[i] = (rhs[i - 1] - off[i - 1] * d->m[i + 1]) / diag[i - 1];
    }
  }
  return BoundedCurve(knots, [d](double x) { return spline_eval(*d, x); },
                      "spline");
}

BoundedCurve rkhs_interpolate(const std::vector<Knot>& knots, double tau) {
  validate_knots(knots, 1);
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const std::size_t n = knots.size();
  const double span = knots.back().x - knots.front().x;
  const double scale = span > 0.0 ? span : 1.0;
  auto kern = [tau, scale](double a, double b) {
    return std::exp(-tau * std::abs(a - b) / scale) / (2.0 * tau);
  };
  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs(i) = knots[i].sigma;
    for (std::size_t j = 0; j < n; ++j) {
      gram(i, j) = kern(knots[i].x, knots[j].x);
    }
  }
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) {
    throw std::runtime_error("rkhs_interpolate: Gram factorization failed");
  }
  Eigen::VectorXd coeff = ldlt.solve(rhs);
  const double resid = (gram * coeff - rhs).cwiseAbs().maxCoeff() /
                       rhs.cwiseAbs().maxCoeff();
  if (!(resid < 1e-8)) {
    throw std::runtime_error(
        "rkhs_interpolate: Gram system singular or ill-conditioned (residual " +
        std::to_string(resid) + ")");
  }
  std::vector<double> xs(n), cs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = knots[i].x;
    cs[i] = coeff(i);
  }
  auto eval = [xs, cs, kern](double x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) acc += cs[j] * kern(x, xs[j]);
    return acc;
  };
  return BoundedCurve(knots, eval, "rkhs");
}

void check_positive(const BoundedCurve& curve, int mesh) {
  if (mesh < 2) throw std::invalid_argument("check_positive: mesh < 2");
  const double lo = curve.lo();
  const double hi = curve.hi();
  for (int i = 0; i < mesh; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) /
                              static_cast<double>(mesh - 1);
    const double v = curve.raw(x);
    if (!(v > 0.0)) {
      std::ostringstream msg;
      msg << "interpolated curve (" << curve.method()
          << ") is non-positive at x=" << x << " (value " << v
          << "); aborting rather than clamping";
      throw std::runtime_error(msg.str());
    }
  }
}

}  // namespace bubbles::interp
