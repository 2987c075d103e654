#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bubbles/bubble_verdict.hpp"
#include "bubbles/interpolation.hpp"
#include "bubbles/market_data.hpp"
#include "bubbles/rkhs.hpp"
#include "bubbles/vol_estimator.hpp"

namespace bubbles::pipeline {

/// Full pipeline configuration; the defaults reproduce the reference
/// settings (open prices, unit time span, indicator estimator, min_visits 2,
/// tau 6, smoothness 1, epsilon 0.05). The bounded curve defaults to the
/// cubic spline: the exponential-kernel interpolant sags between knots,
/// which drags the m search toward its lower bound regardless of the data.
struct RunConfig {
  std::string field = "open";
  double time_span = 1.0;
  std::string estimator = "zmirou";    ///< zmirou | smoothed
  double min_visits = 2.0;
  std::string interpolator = "spline"; ///< spline | rkhs
  double tau = 6.0;
  int smoothness = 1;                  ///< RKHS extrapolation n
  double m_lo = 0.5;
  double m_hi = 25.0;
  int mesh = 200;                      ///< objective quadrature mesh
  double epsilon = 0.05;               ///< indeterminacy half-width
  double ci_level = 0.95;
  double integral_lower = 0.0;         ///< 0 = first retained grid point
  double split_factor = 10.0;          ///< integral split at factor * x_M
  int curve_mesh = 512;                ///< plot/positivity mesh
  int grid_prefix = 0;                 ///< 0 = all reliable; else cap prefix
  std::uint64_t seed = 1;              ///< provenance for simulated inputs
};

void validate_config(const RunConfig& cfg);
nlohmann::json config_json(const RunConfig& cfg);

// -- stage file schemas (all documented in the README) --------------------

void write_estimate_csv(const std::string& path,
                        const vol::VolatilityEstimate& est);
vol::VolatilityEstimate read_estimate_csv(const std::string& path);

void write_curve_csv(const std::string& path, const std::vector<double>& xs,
                     const std::vector<double>& spline_vals,
                     const std::vector<double>& rkhs_vals);

void write_mscan_csv(const std::string& path,
                     const std::vector<rkhs::ScanRow>& scan);
std::vector<rkhs::ScanRow> read_mscan_csv(const std::string& path);

void write_extrapolation_csv(const std::string& path,
                             const rkhs::ExtrapolationModel& model, double lo,
                             double hi, int mesh);

void write_model_json(const std::string& path,
                      const rkhs::ExtrapolationModel& model);
rkhs::ExtrapolationModel read_model_json(const std::string& path);

// -- pipeline stages -------------------------------------------------------

struct EstimateStage {
  market::PriceSeries series;  ///< rescaled input
  market::SeriesSummary summary;
  vol::GridSpec grid;
  vol::VolatilityEstimate estimate;  ///< full grid, CI + reliability flags
};

EstimateStage compute_estimate(const market::PriceSeries& raw,
                               const RunConfig& cfg);

struct KnotSet {
  vol::VolatilityEstimate retained;       ///< reliable prefix
  std::vector<interp::Knot> sigma_knots;  ///< (x_k, sigma(x_k))
  std::vector<double> xs;                 ///< knot abscissae
  std::vector<double> f_values;           ///< 1 / sigma^2(x_k)
};

KnotSet knots_from_estimate(const vol::VolatilityEstimate& est,
                            const RunConfig& cfg);

struct Curves {
  std::optional<interp::BoundedCurve> spline;
  std::optional<interp::BoundedCurve> rkhs;
  std::string used;  ///< method backing sigma_b
  const interp::BoundedCurve& selected() const;
};

Curves build_curves(const std::vector<interp::Knot>& knots,
                    const RunConfig& cfg);

struct DetectResult {
  market::SeriesSummary summary;
  vol::GridSpec grid;
  vol::VolatilityEstimate estimate;
  KnotSet knots;
  std::string interpolant_used;
  rkhs::MSearchResult search;
  verdict::Verdict verdict;
  nlohmann::json report;
};

/// Whole pipeline on an in-memory series (no files written).
DetectResult detect_series(const market::PriceSeries& raw,
                           const RunConfig& cfg);

// -- file-based subcommand bodies ------------------------------------------

market::SeriesSummary run_estimate(const std::string& input,
                                   const std::string& outdir,
                                   const RunConfig& cfg);
void run_interpolate(const std::string& outdir, const RunConfig& cfg);
void run_extrapolate(const std::string& outdir, const RunConfig& cfg);
nlohmann::json run_report(const std::string& input, const std::string& outdir,
                          const RunConfig& cfg);
DetectResult run_detect(const std::string& input, const std::string& outdir,
                        const RunConfig& cfg);

}  // namespace bubbles::pipeline
