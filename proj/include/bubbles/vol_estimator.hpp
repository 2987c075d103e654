#pragma once

#include <string>
#include <vector>

#include "bubbles/market_data.hpp"

namespace bubbles::vol {

/// Estimation grid. Centers are equally spaced with spacing equal to twice
/// the price-unit half width, so neighbouring visit bands touch but do not
/// overlap.
struct GridSpec {
  std::vector<double> centers;   ///< ascending, currency units
  double half_width = 0.0;       ///< bandwidth h = n^(-1/3), normalized units
  double half_width_price = 0.0; ///< h * (max - min), currency units
};

/// Grid rule: h = n^(-1/3), centers x_k = min + (2k - 1) * h * (max - min)
/// for k = 1..K with K = ceil(1 / (2h)) + 1. Requires n >= 8 and max > min.
GridSpec build_grid(const market::PriceSeries& series);

struct VolPoint {
  double center = 0.0;
  double visits = 0.0;    ///< integer count for the indicator estimator,
                          ///< kernel mass for the smoothed one
  double sigma_sq = 0.0;  ///< NaN when visits == 0
  double ci_low = 0.0;    ///< NaN until confidence_interval runs
  double ci_high = 0.0;
  bool estimated = false; ///< visits > 0
  bool reliable = false;  ///< set by mark_reliable / reliability_filter
};

struct VolatilityEstimate {
  std::vector<VolPoint> points;  ///< grid order
  std::string estimator;         ///< "zmirou" or "smoothed"
};

/// Local-time estimator: at each center, the average of squared increments
/// (S_{i+1} - S_i)^2 / dt over the times i < n-1 with |S_i - x_k| strictly
/// inside the band. Zero-visit points are flagged, not errors.
VolatilityEstimate zmirou_estimate(const market::PriceSeries& series,
                                   const GridSpec& grid);

/// Triangular-kernel weighted variant with the same bandwidth; visits is the
/// total kernel mass.
VolatilityEstimate smoothed_estimate(const market::PriceSeries& series,
                                     const GridSpec& grid);

/// Multiplicative normal-approximation interval
/// sigma_sq * [max(0, 1 - z*sqrt(2/N)), 1 + z*sqrt(2/N)], z the standard
/// normal quantile for (1 + level) / 2.
VolatilityEstimate confidence_interval(const VolatilityEstimate& est,
                                       double level);

/// Flags each point reliable iff visits >= min_visits.
VolatilityEstimate mark_reliable(const VolatilityEstimate& est,
                                 double min_visits);

/// Retains the longest prefix of grid points all having visits >= min_visits;
/// errors when the prefix is empty.
VolatilityEstimate reliability_filter(const VolatilityEstimate& est,
                                      double min_visits);

}  // namespace bubbles::vol
