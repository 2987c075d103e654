#include "bubbles/vol_estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "bubbles/numerics.hpp"

namespace bubbles::vol {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

VolatilityEstimate estimate_impl(const market::PriceSeries& series,
                                 const GridSpec& grid, bool weighted) {
  if (!(series.dt > 0.0)) {
    throw std::invalid_argument("estimate: series dt must be positive");
  }
  if (grid.centers.empty() || !(grid.half_width_price > 0.0)) {
    throw std::invalid_argument("estimate: invalid grid");
  }
  const auto& s = series.prices;
  const std::size_t n = s.size();
  const double band = grid.half_width_price;

  VolatilityEstimate out;
  out.estimator = weighted ? "smoothed" : "zmirou";
  out.points.reserve(grid.centers.size());
  for (double center : grid.centers) {
    double mass = 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double u = std::abs(s[i] - center) / band;
      if (u >= 1.0) continue;  // strict-inequality band
      const double w = weighted ? 1.0 - u : 1.0;
      const double incr = s[i + 1] - s[i];
      mass += w;
      sum += w * incr * incr / series.dt;
    }
    VolPoint p;
    p.center = center;
    p.visits = mass;
    p.estimated = mass > 0.0;
    p.sigma_sq = p.estimated ? sum / mass : kNaN;
    p.ci_low = kNaN;
    p.ci_high = kNaN;
    out.points.push_back(p);
  }
  return out;
}

}  // namespace

GridSpec build_grid(const market::PriceSeries& series) {
  const std::size_t n = series.size();
  if (n < 8) {
    throw std::invalid_argument("build_grid: need at least 8 observations, got " +
                                std::to_string(n));
  }
  const auto sm = market::summary(series);
  if (!(sm.max > sm.min)) {
    throw std::invalid_argument("build_grid: constant series (max == min)");
  }
  const double cbrt_n = std::cbrt(static_cast<double>(n));
  const double h = 1.0 / cbrt_n;
  // ceil with a small slack so exact integer ratios (e.g. n = 1000) do not
  // round up through floating-point noise.
  const auto k_count =
      static_cast<std::size_t>(std::ceil(cbrt_n / 2.0 - 1e-9)) + 1;
  GridSpec grid;
  grid.half_width = h;
  grid.half_width_price = h * (sm.max - sm.min);
  grid.centers.reserve(k_count);
  for (std::size_t k = 1; k <= k_count; ++k) {
    grid.centers.push_back(sm.min + static_cast<double>(2 * k - 1) *
                                        grid.half_width_price);
  }
  return grid;
}

VolatilityEstimate zmirou_estimate(const market::PriceSeries& series,
                                   const GridSpec& grid) {
  return estimate_impl(series, grid, false);
}

VolatilityEstimate smoothed_estimate(const market::PriceSeries& series,
                                     const GridSpec& grid) {
  return estimate_impl(series, grid, true);
}

VolatilityEstimate confidence_interval(const VolatilityEstimate& est,
                                       double level) {
  if (!(level > 0.0 && level < 1.0)) {
    throw std::invalid_argument("confidence_interval: level must be in (0, 1)");
  }
  const double z = num::normal_quantile(0.5 * (1.0 + level));
  VolatilityEstimate out = est;
  for (auto& p : out.points) {
    if (!p.estimated) continue;
    const double half = z * std::sqrt(2.0 / p.visits);
    p.ci_low = p.sigma_sq * std::max(0.0, 1.0 - half);
    p.ci_high = p.sigma_sq * (1.0 + half);
  }
  return out;
}

VolatilityEstimate mark_reliable(const VolatilityEstimate& est,
                                 double min_visits) {
  if (!(min_visits >= 1.0)) {
    throw std::invalid_argument("mark_reliable: min_visits must be >= 1");
  }
  VolatilityEstimate out = est;
  for (auto& p : out.points) {
    p.reliable = p.estimated && p.visits >= min_visits;
  }
  return out;
}

VolatilityEstimate reliability_filter(const VolatilityEstimate& est,
                                      double min_visits) {
  VolatilityEstimate marked = mark_reliable(est, min_visits);
  std::size_t keep = 0;
  while (keep < marked.points.size() && marked.points[keep].reliable) ++keep;
  if (keep == 0) {
    throw std::runtime_error(
        "reliability_filter: no grid point meets the visit threshold");
  }
  marked.points.resize(keep);
  return marked;
}

}  // namespace bubbles::vol
