#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace bubbles::market {

/// A validated price series: positive prices at strictly increasing raw
/// timestamps, plus the model-time step used by the estimators. Values are
/// immutable by convention; all operations return new objects.
struct PriceSeries {
  std::vector<double> timestamps;  ///< raw instants, seconds, strictly increasing
  std::vector<double> prices;      ///< currency units, > 0
  double dt = 0.0;                 ///< model-time step, = time_span / (n - 1)
  double time_span = 1.0;          ///< total model time T

  std::size_t size() const { return prices.size(); }
};

/// Builds a series and enforces the invariants (n >= 2, prices > 0,
/// strictly increasing timestamps, time_span > 0).
PriceSeries make_series(std::vector<double> timestamps,
                        std::vector<double> prices, double time_span = 1.0);

/// Parses delimited minute-bar text (comma default, tab accepted). The header
/// must name the requested price field; timestamps are ISO-8601
/// ("YYYY-MM-DD[ T]HH:MM:SS[.fff][Z]", date-only also accepted) or numeric
/// epoch seconds. The returned series has time_span = 1.
PriceSeries parse_ticks(std::string_view text, std::string_view field = "open");

/// parse_ticks on the contents of a file ("-" reads standard input).
PriceSeries parse_ticks_file(const std::string& path,
                             std::string_view field = "open");

/// Returns a copy with dt = total / (n - 1); prices unchanged.
PriceSeries rescale_time(const PriceSeries& series, double total);

struct SeriesSummary {
  double min = 0.0;
  double max = 0.0;
  std::size_t n = 0;
  double first = 0.0;
  double last = 0.0;
};

SeriesSummary summary(const PriceSeries& series);

/// One-line JSON rendering of a summary.
std::string summary_json(const SeriesSummary& s);

/// Writes the series in the same delimited format parse_ticks reads
/// (header "timestamp,open"), full double precision.
void write_series_csv(const PriceSeries& series, std::ostream& out);
void write_series_csv_file(const PriceSeries& series, const std::string& path);

}  // namespace bubbles::market
