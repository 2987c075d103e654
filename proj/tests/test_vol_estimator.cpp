#include "doctest.h"

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "bubbles/market_data.hpp"
#include "bubbles/sde_sim.hpp"
#include "bubbles/vol_estimator.hpp"

using namespace bubbles;

namespace {

market::PriceSeries linspace_series(std::size_t n, double lo, double hi) {
  std::vector<double> ts(n), px(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = static_cast<double>(i);
    px[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return market::make_series(std::move(ts), std::move(px));
}

vol::VolatilityEstimate from_visits(const std::vector<double>& visits) {
  vol::VolatilityEstimate est;
  est.estimator = "test";
  for (std::size_t i = 0; i < visits.size(); ++i) {
    vol::VolPoint p;
    p.center = 1.0 + static_cast<double>(i);
    p.visits = visits[i];
    p.estimated = visits[i] > 0;
    p.sigma_sq = p.estimated ? 1.0 : std::nan("");
    est.points.push_back(p);
  }
  return est;
}

}  // namespace

TEST_SUITE_BEGIN("vol_estimator");

TEST_CASE("grid rule reproduces the 7-point reference grid") {
  auto s = linspace_series(1535, 81.24, 120.74);
  auto g = vol::build_grid(s);
  REQUIRE(g.centers.size() == 7);
  const double spacing = g.centers[1] - g.centers[0];
  CHECK(spacing == doctest::Approx(6.85).epsilon(0.008));
  CHECK(g.centers[4] == doctest::Approx(112.065).epsilon(0.0005));
  CHECK(g.centers[5] == doctest::Approx(118.915).epsilon(0.0005));
  CHECK(g.centers[6] == doctest::Approx(125.764).epsilon(0.0005));
  CHECK(g.half_width == doctest::Approx(std::pow(1535.0, -1.0 / 3.0)));
  // centers equally spaced at twice the price half-width
  for (std::size_t k = 1; k < g.centers.size(); ++k) {
    CHECK(g.centers[k] - g.centers[k - 1] ==
          doctest::Approx(2.0 * g.half_width_price).epsilon(1e-9));
  }
}

TEST_CASE("grid rule at n = 1000 (exact integer ratio)") {
  auto s = linspace_series(1000, 1.0, 2.0);
  auto g = vol::build_grid(s);
  REQUIRE(g.centers.size() == 6);
  const std::vector<double> want{1.1, 1.3, 1.5, 1.7, 1.9, 2.1};
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(g.centers[i] == doctest::Approx(want[i]).epsilon(1e-9));
  }
}

TEST_CASE("grid rule smallest legal case n = 8") {
  auto s = linspace_series(8, 2.0, 4.0);
  auto g = vol::build_grid(s);
  REQUIRE(g.centers.size() == 2);
  CHECK(g.centers[0] == doctest::Approx(3.0));   // min + 0.5 * range
  CHECK(g.centers[1] == doctest::Approx(5.0));   // min + 1.5 * range
}

TEST_CASE("grid rule preconditions") {
  CHECK_THROWS(vol::build_grid(linspace_series(7, 1.0, 2.0)));
  auto flat = market::make_series({0, 1, 2, 3, 4, 5, 6, 7},
                                  std::vector<double>(8, 3.0));
  CHECK_THROWS(vol::build_grid(flat));
}

TEST_CASE("hand-computed indicator estimate") {
  auto s = market::make_series({0, 1, 2}, {1.0, 1.1, 0.9}, 1.0);  // dt = 0.5
  vol::GridSpec grid{{1.0}, 0.15 / 0.2, 0.15};
  auto est = vol::zmirou_estimate(s, grid);
  REQUIRE(est.points.size() == 1);
  CHECK(est.points[0].visits == 2.0);
  CHECK(est.points[0].sigma_sq == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("constant series estimates zero variance") {
  auto s = market::make_series({0, 1, 2, 3}, {5.0, 5.0, 5.0, 5.0});
  vol::GridSpec grid{{5.0}, 0.1, 0.5};
  for (auto est : {vol::zmirou_estimate(s, grid), vol::smoothed_estimate(s, grid)}) {
    REQUIRE(est.points[0].estimated);
    CHECK(est.points[0].sigma_sq == 0.0);
  }
}

TEST_CASE("estimators agree when in-band observations sit at the center") {
  auto s = market::make_series({0, 1, 2, 3, 4}, {1.0, 1.5, 1.0, 1.7, 1.0});
  vol::GridSpec grid{{1.0}, 0.1, 0.1};
  auto z = vol::zmirou_estimate(s, grid);
  auto w = vol::smoothed_estimate(s, grid);
  CHECK(z.points[0].visits == w.points[0].visits);
  CHECK(z.points[0].sigma_sq == doctest::Approx(w.points[0].sigma_sq).epsilon(1e-15));
}

TEST_CASE("band boundary ties are excluded") {
  auto s = market::make_series({0, 1, 2}, {1.1, 2.0, 3.0});
  vol::GridSpec grid{{1.0}, 0.1, 0.1};  // |1.1 - 1.0| == band exactly
  auto est = vol::zmirou_estimate(s, grid);
  CHECK(est.points[0].visits == 0.0);
  CHECK(!est.points[0].estimated);
  CHECK(std::isnan(est.points[0].sigma_sq));
}

TEST_CASE("estimates are invariant to timestamp shifts") {
  sim::SimSpec spec;
  spec.seed = 9;
  spec.steps = 2000;
  auto s = sim::simulate(spec);
  auto shifted = s;
  for (auto& t : shifted.timestamps) t += 12345.0;
  auto g = vol::build_grid(s);
  auto a = vol::zmirou_estimate(s, g);
  auto b = vol::zmirou_estimate(shifted, g);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].visits == b.points[i].visits);
  }
}

TEST_CASE("property: disjoint bands visit each increment at most once") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    sim::SimSpec spec;
    spec.seed = rng();
    spec.steps = 3000;
    spec.sigma0 = 0.3;
    auto s = sim::simulate(spec);
    auto g = vol::build_grid(s);
    auto est = vol::zmirou_estimate(s, g);
    double total = 0.0;
    for (const auto& p : est.points) total += p.visits;
    CHECK(total <= static_cast<double>(s.size() - 1));
  }
}

TEST_CASE("confidence interval from the normal-quantile formula") {
  vol::VolatilityEstimate est;
  est.estimator = "zmirou";
  vol::VolPoint p;
  p.center = 1.0;
  p.visits = 200.0;
  p.sigma_sq = 1.0;
  p.estimated = true;
  est.points.push_back(p);
  auto ci = vol::confidence_interval(est, 0.95);
  // z_{0.975} = 1.959963985, sqrt(2/200) = 0.1
  CHECK(ci.points[0].ci_low == doctest::Approx(0.8040036015459946).epsilon(1e-9));
  CHECK(ci.points[0].ci_high == doctest::Approx(1.1959963984540054).epsilon(1e-9));

  est.points[0].visits = 2.0;
  est.points[0].sigma_sq = 0.05;
  auto clamped = vol::confidence_interval(est, 0.95);
  CHECK(clamped.points[0].ci_low == 0.0);  // 1 - 1.96*1 < 0 clamps
  CHECK(clamped.points[0].ci_high > 0.05);

  est.points[0].visits = 1e12;
  est.points[0].sigma_sq = 1.0;
  auto tight = vol::confidence_interval(est, 0.95);
  CHECK(tight.points[0].ci_high - tight.points[0].ci_low < 1e-5);

  CHECK_THROWS(vol::confidence_interval(est, 0.0));
  CHECK_THROWS(vol::confidence_interval(est, 1.0));
  CHECK_THROWS(vol::confidence_interval(est, -0.5));
}

TEST_CASE("reliability filter keeps the longest qualifying prefix") {
  auto est = from_visits({50, 40, 30, 20, 5, 1, 0});
  auto kept = vol::reliability_filter(est, 2);
  REQUIRE(kept.points.size() == 5);
  for (const auto& p : kept.points) CHECK(p.reliable);

  auto all = from_visits({10, 20, 30});
  CHECK(vol::reliability_filter(all, 2).points.size() == 3);

  auto none = from_visits({0, 0});
  CHECK_THROWS(vol::reliability_filter(none, 2));
  CHECK_THROWS(vol::mark_reliable(all, 0.5));
}

TEST_CASE("consistency on simulated power-law diffusions") {
  // sigma(x) = 0.5 x^theta; pooled median relative error at well-visited
  // points stays under 20%
  for (double theta : {0.5, 1.0, 1.5}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      sim::SimSpec spec;
      spec.sigma0 = theta > 1.0 ? 0.2 : 0.5;
      spec.theta = theta;
      spec.s0 = 1.0;
      spec.steps = 100000;
      spec.seed = seed;
      auto s = sim::simulate(spec);
      auto g = vol::build_grid(s);
      auto est = vol::zmirou_estimate(s, g);
      for (const auto& p : est.points) {
        if (p.visits < 500) continue;
        const double truth =
            spec.sigma0 * spec.sigma0 * std::pow(p.center, 2.0 * theta);
        errs.push_back(std::abs(p.sigma_sq / truth - 1.0));
      }
    }
    REQUIRE(errs.size() > 20);
    std::nth_element(errs.begin(), errs.begin() + errs.size() / 2, errs.end());
    CHECK(errs[errs.size() / 2] <= 0.2);
  }
}

TEST_SUITE_END();
