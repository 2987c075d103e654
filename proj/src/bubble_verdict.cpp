#include "bubbles/bubble_verdict.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>

#include "bubbles/numerics.hpp"

namespace bubbles::verdict {

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::Bubble:
      return "Bubble";
    case Classification::NoBubble:
      return "NoBubble";
    case Classification::Indeterminate:
      return "Indeterminate";
  }
  return "Indeterminate";
}

double alpha_from_m(double m) { return 0.5 * (1.0 + m); }

Classification classify(double alpha, double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("classify: epsilon must be nonnegative");
  }
  if (alpha > 1.0 + epsilon) return Classification::Bubble;
  if (alpha < 1.0 - epsilon) return Classification::NoBubble;
  return Classification::Indeterminate;
}

IntegralResult integral_test(const rkhs::ExtrapolationModel& model, double a,
                             double split) {
  if (!(a > 0.0)) throw std::invalid_argument("integral_test: a must be positive");
  if (model.knots.empty()) {
    throw std::invalid_argument("integral_test: empty model");
  }
  if (!(split >= model.knots.back())) {
    throw std::invalid_argument("integral_test: split must be >= last knot");
  }
  if (!(a < split)) {
    throw std::invalid_argument("integral_test: need a < split");
  }

  auto integrand = [&model](double x) {
    const double f = rkhs::eval_f(model, x);
    if (!(f > 0.0)) {
      throw std::runtime_error("integral_test: f <= 0 at x = " +
                               std::to_string(x));
    }
    return x * f;
  };

  // Piece boundaries at the knots keep the quadrature on smooth segments.
  std::vector<double> cuts{a};
  for (double k : model.knots) {
    if (k > a && k < split) cuts.push_back(k);
  }
  cuts.push_back(split);
  double bounded = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    bounded += num::adaptive_simpson(integrand, cuts[i], cuts[i + 1], 1e-10);
  }

  const double limit = rkhs::asymptotic_limit(model);
  IntegralResult out;
  if (model.m > 1.0) {
    out.finite = true;
    out.value_or_bound =
        bounded + limit * std::pow(split, 1.0 - model.m) / (model.m - 1.0);
  } else {
    out.finite = false;
    out.value_or_bound = bounded;  // lower bound of the divergent integral
  }
  return out;
}

Verdict make_verdict(const rkhs::ExtrapolationModel& model, double epsilon,
                     double a, double split) {
  Verdict v;
  v.alpha = alpha_from_m(model.m);
  v.classification = classify(v.alpha, epsilon);
  v.epsilon = epsilon;
  const IntegralResult ir = integral_test(model, a, split);
  v.integral_finite = ir.finite;
  v.integral_value_or_bound = ir.value_or_bound;
  v.integral_lower = a;
  v.integral_split = split;
  return v;
}

namespace {

std::string utc_now_iso() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

nlohmann::json estimate_json(const vol::VolatilityEstimate& est) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& p : est.points) {
    nlohmann::json row;
    row["center"] = p.center;
    row["visits"] = p.visits;
    if (p.estimated) {
      row["sigma_sq"] = p.sigma_sq;
      if (std::isfinite(p.ci_low)) {
        row["ci_low"] = p.ci_low;
        row["ci_high"] = p.ci_high;
      }
    } else {
      row["sigma_sq"] = nullptr;
    }
    row["reliable"] = p.reliable;
    rows.push_back(row);
  }
  return nlohmann::json{{"estimator", est.estimator}, {"points", rows}};
}

}  // namespace

nlohmann::json report(const market::SeriesSummary& series_summary,
                      const vol::VolatilityEstimate& estimate,
                      const rkhs::ExtrapolationModel& model,
                      const Verdict& verdict, const nlohmann::json& run_config,
                      const ReportFiles& files,
                      const nlohmann::json& provenance) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["generated_at"] = utc_now_iso();
  j["config"] = run_config;
  j["input"] = {{"min", series_summary.min},
                {"max", series_summary.max},
                {"n", series_summary.n},
                {"first", series_summary.first},
                {"last", series_summary.last}};
  j["estimate"] = estimate_json(estimate);
  j["files"] = {{"estimate", files.estimate},
                {"curve", files.curve},
                {"mscan", files.mscan},
                {"extrapolation", files.extrapolation},
                {"model", files.model}};
  j["model"] = {{"n", model.n},
                {"m", model.m},
                {"knots", model.knots},
                {"values", model.values},
                {"coefficients", model.coeffs}};
  j["provenance"] = provenance;
  j["verdict"] = {
      {"alpha", verdict.alpha},
      {"classification", classification_name(verdict.classification)},
      {"epsilon", verdict.epsilon},
      {"integral",
       {{"finite", verdict.integral_finite},
        {"value_or_bound", verdict.integral_value_or_bound},
        {"lower", verdict.integral_lower},
        {"split", verdict.integral_split}}}};
  return j;
}

}  // namespace bubbles::verdict
