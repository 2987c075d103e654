#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "bubbles/market_data.hpp"

using namespace bubbles;

namespace {
const std::string kFixture =
    std::string(BUBBLES_FIXTURE_DIR) + "/minutes_4d_synthetic.csv";
}

TEST_SUITE_BEGIN("market_data");

TEST_CASE("two-row file parses in order") {
  auto s = market::parse_ticks(
      "timestamp,open,close\n"
      "2011-05-19T09:30:00,100.0,100.5\n"
      "2011-05-19T09:31:00,101.0,101.5\n",
      "open");
  REQUIRE(s.size() == 2);
  CHECK(s.prices[0] == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(s.prices[1] == doctest::Approx(101.0).epsilon(1e-15));
  auto c = market::parse_ticks(
      "timestamp,open,close\n"
      "2011-05-19T09:30:00,100.0,100.5\n"
      "2011-05-19T09:31:00,101.0,101.5\n",
      "close");
  CHECK(c.prices[1] == doctest::Approx(101.5).epsilon(1e-15));
}

TEST_CASE("bundled minute fixture has the reference shape") {
  auto s = market::parse_ticks_file(kFixture, "open");
  REQUIRE(s.size() == 1535);
  auto sm = market::summary(s);
  CHECK(sm.min == doctest::Approx(81.24).epsilon(1e-12));
  CHECK(sm.max == doctest::Approx(120.74).epsilon(1e-12));
  CHECK(sm.n == 1535);
  CHECK(sm.first == s.prices.front());
  CHECK(sm.last == s.prices.back());
}

TEST_CASE("repeated timestamp is an error") {
  CHECK_THROWS(market::parse_ticks(
      "timestamp,open\n"
      "2011-05-19T09:30:00,100\n"
      "2011-05-19T09:30:00,101\n"));
  CHECK_THROWS(market::parse_ticks("timestamp,open\n5,100\n4,101\n"));
}

TEST_CASE("malformed inputs are rejected") {
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,100\n2,101\n", "blah"));
  // requested field absent from the header
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,100\n2,101\n", "close"));
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,-3\n2,101\n"));
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,0\n2,101\n"));
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,abc\n2,101\n"));
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,100\n"));  // one row
  CHECK_THROWS(market::parse_ticks("timestamp,open\n1,100\n2\n"));
}

TEST_CASE("tab delimiter and epoch timestamps") {
  auto s = market::parse_ticks("time\topen\n1305793800\t100\n1305793860\t101\n");
  REQUIRE(s.size() == 2);
  CHECK(s.timestamps[1] - s.timestamps[0] == doctest::Approx(60.0));
}

TEST_CASE("rescale_time sets dt = total / (n - 1)") {
  auto s = market::parse_ticks_file(kFixture, "open");
  auto r = market::rescale_time(s, 1.0);
  CHECK(r.dt == doctest::Approx(1.0 / 1534.0).epsilon(1e-15));

  auto three = market::make_series({0, 1, 2}, {1.0, 2.0, 3.0});
  CHECK(market::rescale_time(three, 2.0).dt == doctest::Approx(1.0));

  CHECK_THROWS(market::rescale_time(three, 0.0));
  CHECK_THROWS(market::rescale_time(three, -1.0));
  // a one-point series cannot even be constructed
  CHECK_THROWS(market::make_series({0}, {1.0}));
}

TEST_CASE("summary extrema") {
  auto flat = market::make_series({0, 1, 2}, {5.0, 5.0, 5.0});
  auto sm = market::summary(flat);
  CHECK(sm.min == 5.0);
  CHECK(sm.max == 5.0);
  CHECK(sm.n == 3);

  auto two = market::make_series({0, 1}, {1.0, 2.0});
  auto sm2 = market::summary(two);
  CHECK(sm2.min == 1.0);
  CHECK(sm2.max == 2.0);

  CHECK(market::summary_json(sm2).find("\"n\":2") != std::string::npos);
}

TEST_CASE("property: row count preserved and rescale keeps shape") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_int_distribution<int> n_dist(2, 400);
    const int n = n_dist(rng);
    std::ostringstream text;
    text << "timestamp,open\n";
    double ts = 0.0;
    for (int i = 0; i < n; ++i) {
      ts += 1.0 + std::uniform_real_distribution<double>(0.0, 10.0)(rng);
      const double price =
          std::uniform_real_distribution<double>(0.1, 500.0)(rng);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.6f,%.10g\n", ts, price);
      text << buf;
    }
    auto s = market::parse_ticks(text.str());
    REQUIRE(s.size() == static_cast<std::size_t>(n));
    CHECK(market::summary(s).n == static_cast<std::size_t>(n));

    const double total = std::uniform_real_distribution<double>(0.1, 9.0)(rng);
    auto r = market::rescale_time(s, total);
    CHECK(r.size() == s.size());
    CHECK(r.prices == s.prices);
  }
}

TEST_CASE("series csv writer round-trips through the parser") {
  auto s = market::make_series({0, 1, 2, 3},
                               {100.0, 100.1234567890123, 99.5, 101.75});
  std::ostringstream out;
  market::write_series_csv(s, out);
  auto back = market::parse_ticks(out.str(), "open");
  REQUIRE(back.size() == s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(back.prices[i] == s.prices[i]);  // exact, %.17g round-trip
  }
}

TEST_SUITE_END();
