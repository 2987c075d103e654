#include "bubbles/rkhs.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bubbles::rkhs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_nm(int n, double m) {
  if (n < 1) throw std::invalid_argument("smoothness n must be a positive integer");
  if (!(m > 0.0)) throw std::invalid_argument("weight m must be positive");
}

Eigen::MatrixXd gram_matrix(const std::vector<double>& knots, int n, double m) {
  const std::size_t sz = knots.size();
  Eigen::MatrixXd gram(sz, sz);
  for (std::size_t i = 0; i < sz; ++i) {
    for (std::size_t j = i; j < sz; ++j) {
      const double q = kernel_q(n, m, knots[i], knots[j]);
      gram(i, j) = q;
      gram(j, i) = q;
    }
  }
  return gram;
}

}  // namespace

double beta_fn(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("beta_fn: arguments must be positive");
  }
  return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

double hyp2f1_terminating(int n, double m, double z) {
  validate_nm(n, m);
  if (!(z >= 0.0 && z <= 1.0)) {
    throw std::invalid_argument("hyp2f1_terminating: z must be in [0, 1]");
  }
  double term = 1.0;
  double acc = 1.0;
  for (int j = 0; j < n - 1; ++j) {
    term *= (static_cast<double>(1 - n + j) * (m + 1.0 + j)) /
            ((static_cast<double>(n) + m + 1.0 + j) * (j + 1.0)) * z;
    acc += term;
  }
  return acc;
}

double kernel_q(int n, double m, double x, double y) {
  validate_nm(n, m);
  if (!(x > 0.0) || !(y > 0.0)) {
    throw std::invalid_argument("kernel_q: x and y must be positive");
  }
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return static_cast<double>(n) * n * beta_fn(m + 1.0, n) *
         std::pow(hi, -(m + 1.0)) * hyp2f1_terminating(n, m, lo / hi);
}

double ExtrapolationModel::coeff_sum() const {
  double s = 0.0;
  for (double c : coeffs) s += c;
  return s;
}

std::vector<double> solve_coefficients(const std::vector<double>& knots,
                                       const std::vector<double>& values,
                                       int n, double m) {
  validate_nm(n, m);
  if (knots.empty() || knots.size() != values.size()) {
    throw std::invalid_argument("solve_coefficients: knot/value size mismatch");
  }
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!(knots[i] > 0.0)) {
      throw std::invalid_argument("solve_coefficients: knots must be positive");
    }
    if (!(values[i] > 0.0)) {
      throw std::invalid_argument("solve_coefficients: values must be positive");
    }
    if (i > 0 && !(knots[i] > knots[i - 1])) {
      throw std::invalid_argument(
          "solve_coefficients: duplicate or non-ascending knots");
    }
  }
  const auto sz = static_cast<Eigen::Index>(knots.size());
  Eigen::MatrixXd gram = gram_matrix(knots, n, m);
  Eigen::VectorXd rhs(sz);
  for (Eigen::Index i = 0; i < sz; ++i) rhs(i) = values[i];

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram,
                                                     Eigen::EigenvaluesOnly);
  const double ev_min = eig.eigenvalues().minCoeff();
  const double ev_max = eig.eigenvalues().maxCoeff();
  if (!(ev_min > 0.0)) {
    throw std::runtime_error("solve_coefficients: Gram matrix not positive definite");
  }
  if (ev_max / ev_min > 1e14) {
    throw std::runtime_error(
        "solve_coefficients: Gram matrix numerically singular (condition " +
        std::to_string(ev_max / ev_min) + ")");
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  Eigen::VectorXd c = ldlt.solve(rhs);
  c += ldlt.solve(rhs - gram * c);  // one refinement step

  for (Eigen::Index k = 0; k < sz; ++k) {
    const double resid = std::abs((gram.row(k) * c)(0) - rhs(k)) / rhs(k);
    if (!(resid < 1e-9)) {
      throw std::runtime_error(
          "solve_coefficients: interpolation residual " +
          std::to_string(resid) + " exceeds 1e-9 at knot " + std::to_string(k));
    }
  }
  return std::vector<double>(c.data(), c.data() + sz);
}

ExtrapolationModel make_model(std::vector<double> knots,
                              std::vector<double> values, int n, double m) {
  ExtrapolationModel model;
  model.coeffs = solve_coefficients(knots, values, n, m);
  model.knots = std::move(knots);
  model.values = std::move(values);
  model.n = n;
  model.m = m;
  return model;
}

double eval_f(const ExtrapolationModel& model, double x) {
  if (!(x > 0.0)) throw std::invalid_argument("eval_f: x must be positive");
  double acc = 0.0;
  for (std::size_t i = 0; i < model.knots.size(); ++i) {
    acc += model.coeffs[i] * kernel_q(model.n, model.m, model.knots[i], x);
  }
  return acc;
}

Extrapolated eval_extrapolated(const ExtrapolationModel& model, double x) {
  const double f = eval_f(model, x);
  if (!(f > 0.0)) {
    throw std::runtime_error("eval_extrapolated: non-positive f(" +
                             std::to_string(x) + ") = " + std::to_string(f));
  }
  return Extrapolated{f, 1.0 / std::sqrt(f)};
}

double asymptotic_limit(const ExtrapolationModel& model) {
  const double s = model.coeff_sum();
  if (!(s > 0.0)) {
    throw std::runtime_error(
        "asymptotic_limit: coefficient sum is not positive; no valid "
        "power-law tail");
  }
  return static_cast<double>(model.n) * model.n * beta_fn(model.m + 1.0, model.n) * s;
}

MSearchResult optimize_m(const std::vector<double>& knots,
                         const std::vector<double>& values, int n,
                         const interp::BoundedCurve& sigma_b, double m_lo,
                         double m_hi, int mesh) {
  validate_nm(n, m_lo);
  if (!(m_hi > m_lo)) throw std::invalid_argument("optimize_m: empty m range");
  if (mesh < 2) throw std::invalid_argument("optimize_m: mesh must be >= 2");
  if (knots.size() < 2) {
    throw std::invalid_argument("optimize_m: need at least 2 knots");
  }
  const double x1 = knots.front();
  const double xM = knots.back();
  const double slack = 1e-9 * std::max(1.0, sigma_b.hi() - sigma_b.lo());
  if (x1 < sigma_b.lo() - slack || xM > sigma_b.hi() + slack) {
    throw std::invalid_argument("optimize_m: knots outside sigma_b domain");
  }

  // Comparison mesh over the last third of the bounded interval.
  const double left = x1 + (2.0 / 3.0) * (xM - x1);
  std::vector<double> xs(mesh);
  std::vector<double> sb(mesh);
  for (int i = 0; i < mesh; ++i) {
    xs[i] = left + (xM - left) * static_cast<double>(i) /
                       static_cast<double>(mesh - 1);
    sb[i] = sigma_b(xs[i]);
  }
  // Tail positivity mesh on [x_M, 10 x_M], log-spaced.
  constexpr int kTailMesh = 200;
  std::vector<double> tail(kTailMesh);
  for (int i = 0; i < kTailMesh; ++i) {
    tail[i] = xM * std::pow(10.0, static_cast<double>(i) /
                                      static_cast<double>(kTailMesh - 1));
  }

  auto evaluate = [&](double m) -> std::pair<double, bool> {
    ExtrapolationModel model;
    try {
      model = make_model(knots, values, n, m);
    } catch (const std::exception&) {
      return {kInf, false};
    }
    if (!(model.coeff_sum() > 0.0)) return {kInf, false};
    for (double x : tail) {
      if (!(eval_f(model, x) > 0.0)) return {kInf, false};
    }
    double sum_sq = 0.0;
    double prev_sq = 0.0;
    for (int i = 0; i < mesh; ++i) {
      const double f = eval_f(model, xs[i]);
      if (!(f > 0.0)) return {kInf, false};
      const double diff = 1.0 / std::sqrt(f) - sb[i];
      const double sq = diff * diff;
      if (i > 0) sum_sq += 0.5 * (sq + prev_sq) * (xs[i] - xs[i - 1]);
      prev_sq = sq;
    }
    return {std::sqrt(sum_sq), true};
  };

  MSearchResult result;
  constexpr int kScan = 50;
  double best_m = 0.0;
  double best_j = kInf;
  int best_idx = -1;
  result.scan.reserve(kScan);
  for (int i = 0; i < kScan; ++i) {
    const double m = m_lo + (m_hi - m_lo) * static_cast<double>(i) /
                                static_cast<double>(kScan - 1);
    auto [j, feasible] = evaluate(m);
    result.scan.push_back(ScanRow{m, j, feasible});
    if (feasible && j < best_j) {
      best_j = j;
      best_m = m;
      best_idx = i;
    }
  }
  if (best_idx < 0) {
    throw std::runtime_error("optimize_m: no feasible m in [" +
                             std::to_string(m_lo) + ", " +
                             std::to_string(m_hi) + "]");
  }

  // Golden-section refinement within the bracket around the scan optimum.
  double a = result.scan[std::max(best_idx - 1, 0)].m;
  double b = result.scan[std::min(best_idx + 1, kScan - 1)].m;
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = evaluate(c).first;
  double fd = evaluate(d).first;
  while (b - a > 1e-7 * std::max(1.0, std::abs(best_m))) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = evaluate(c).first;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = evaluate(d).first;
    }
  }
  for (double cand : {c, d}) {
    auto [j, feasible] = evaluate(cand);
    if (feasible && (j < best_j || (j == best_j && cand < best_m))) {
      best_j = j;
      best_m = cand;
    }
  }

  result.m = best_m;
  result.objective = best_j;
  result.model = make_model(knots, values, n, best_m);
  return result;
}

}  // namespace bubbles::rkhs
