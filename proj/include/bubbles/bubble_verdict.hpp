#pragma once

#include <string>

#include "json.hpp"

#include "bubbles/market_data.hpp"
#include "bubbles/rkhs.hpp"
#include "bubbles/vol_estimator.hpp"

namespace bubbles::verdict {

enum class Classification { Bubble, NoBubble, Indeterminate };

std::string classification_name(Classification c);

/// Tail power of sigma: alpha = (1 + m) / 2.
double alpha_from_m(double m);

/// Bubble iff alpha > 1 + epsilon, NoBubble iff alpha < 1 - epsilon,
/// Indeterminate inside the band.
Classification classify(double alpha, double epsilon = 0.05);

struct IntegralResult {
  bool finite = false;
  double value_or_bound = 0.0;  ///< value when finite, bounded part otherwise
};

/// Integral criterion: integral over [a, inf) of x * f(x) dx, computed as
/// adaptive quadrature on [a, split] plus the analytic power-law tail
/// L * split^(1-m) / (m - 1) beyond, which is finite iff m > 1. Errors when
/// f <= 0 is encountered on [a, split].
IntegralResult integral_test(const rkhs::ExtrapolationModel& model, double a,
                             double split);

struct Verdict {
  double alpha = 0.0;
  Classification classification = Classification::Indeterminate;
  double epsilon = 0.05;
  bool integral_finite = false;
  double integral_value_or_bound = 0.0;
  double integral_lower = 0.0;
  double integral_split = 0.0;
};

Verdict make_verdict(const rkhs::ExtrapolationModel& model, double epsilon,
                     double a, double split);

struct ReportFiles {
  std::string estimate = "estimate.csv";
  std::string curve = "curve.csv";
  std::string mscan = "mscan.csv";
  std::string extrapolation = "extrapolation.csv";
  std::string model = "model.json";
};

/// Assembles the final JSON report. Deterministic given identical inputs
/// apart from the generated_at field.
nlohmann::json report(const market::SeriesSummary& series_summary,
                      const vol::VolatilityEstimate& estimate,
                      const rkhs::ExtrapolationModel& model,
                      const Verdict& verdict, const nlohmann::json& run_config,
                      const ReportFiles& files,
                      const nlohmann::json& provenance);

}  // namespace bubbles::verdict
