#include "bubbles/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace bubbles::market {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

bool parse_full_double(std::string_view s, double& out) {
  std::string buf(s);
  char* end = nullptr;
  out = std::strtod(buf.c_str(), &end);
  return end == buf.c_str() + buf.size() && !buf.empty();
}

// Accepts numeric epoch seconds, "YYYY-MM-DD", and
// "YYYY-MM-DD[ T]HH:MM:SS[.fff][Z]". Returns seconds since the epoch.
double parse_timestamp(std::string_view s, std::size_t line_no) {
  double epoch;
  if (parse_full_double(s, epoch)) return epoch;
  std::string buf(s);
  if (!buf.empty() && (buf.back() == 'Z' || buf.back() == 'z')) buf.pop_back();
  int y, mo, d;
  int h = 0, mi = 0;
  double sec = 0.0;
  char sep;
  int consumed = 0;
  if (std::sscanf(buf.c_str(), "%d-%d-%d%n", &y, &mo, &d, &consumed) == 3) {
    if (static_cast<std::size_t>(consumed) < buf.size()) {
      if (std::sscanf(buf.c_str(), "%d-%d-%d%c%d:%d:%lf", &y, &mo, &d, &sep,
                      &h, &mi, &sec) != 7 ||
          (sep != ' ' && sep != 'T' && sep != 't')) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": unparseable timestamp '" +
                                    std::string(s) + "'");
      }
    }
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 ||
        sec >= 61.0) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": invalid timestamp '" + std::string(s) +
                                  "'");
    }
    return static_cast<double>(days_from_civil(y, mo, d)) * 86400.0 +
           h * 3600.0 + mi * 60.0 + sec;
  }
  throw std::invalid_argument("line " + std::to_string(line_no) +
                              ": unparseable timestamp '" + std::string(s) +
                              "'");
}

}  // namespace

PriceSeries make_series(std::vector<double> timestamps,
                        std::vector<double> prices, double time_span) {
  if (prices.size() < 2) {
    throw std::invalid_argument("price series needs at least 2 observations, got " +
                                std::to_string(prices.size()));
  }
  if (timestamps.size() != prices.size()) {
    throw std::invalid_argument("timestamp/price count mismatch");
  }
  if (!(time_span > 0.0)) {
    throw std::invalid_argument("time_span must be positive");
  }
  for (std::size_t i = 0; i < prices.size(); ++i) {
    if (!(prices[i] > 0.0) || !std::isfinite(prices[i])) {
      throw std::invalid_argument("non-positive price at index " +
                                  std::to_string(i));
    }
    if (i > 0 && !(timestamps[i] > timestamps[i - 1])) {
      throw std::invalid_argument("timestamps not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
  PriceSeries s;
  s.timestamps = std::move(timestamps);
  s.prices = std::move(prices);
  s.time_span = time_span;
  s.dt = time_span / static_cast<double>(s.prices.size() - 1);
  return s;
}

PriceSeries parse_ticks(std::string_view text, std::string_view field) {
  const std::string want = lower(trim(field));
  if (want != "open" && want != "high" && want != "low" && want != "close") {
    throw std::invalid_argument("unknown price field '" + std::string(field) +
                                "' (expected open|high|low|close)");
  }

  std::size_t pos = 0;
  auto next_line = [&](std::string_view& line) {
    if (pos >= text.size()) return false;
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    line = text.substr(pos, nl - pos);
    pos = nl + 1;
    return true;
  };

  std::string_view header;
  if (!next_line(header)) throw std::invalid_argument("empty input");
  const char delim = header.find('\t') != std::string_view::npos ? '\t' : ',';
  auto cols = split(header, delim);

  int ts_col = -1;
  int price_col = -1;
  for (std::size_t i = 0; i < cols.size(); ++i) {
    const std::string name = lower(cols[i]);
    if (name == "timestamp" || name == "time" || name == "datetime" ||
        name == "date") {
      if (ts_col < 0) ts_col = static_cast<int>(i);
    } else if (name == want) {
      price_col = static_cast<int>(i);
    }
  }
  if (price_col < 0) {
    throw std::invalid_argument("header is missing field '" + want + "'");
  }
  if (ts_col < 0) ts_col = 0;
  if (ts_col == price_col) {
    throw std::invalid_argument("field '" + want +
                                "' collides with the timestamp column");
  }

  std::vector<double> timestamps;
  std::vector<double> prices;
  std::string_view line;
  std::size_t line_no = 1;
  while (next_line(line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, delim);
    if (cells.size() <= static_cast<std::size_t>(std::max(ts_col, price_col))) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": too few columns");
    }
    double ts = parse_timestamp(cells[ts_col], line_no);
    double price;
    if (!parse_full_double(cells[price_col], price)) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": non-numeric price '" +
                                  std::string(cells[price_col]) + "'");
    }
    if (!(price > 0.0)) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": non-positive price");
    }
    if (!timestamps.empty() && !(ts > timestamps.back())) {
      throw std::invalid_argument("line " + std::to_string(line_no) +
                                  ": non-increasing timestamp");
    }
    timestamps.push_back(ts);
    prices.push_back(price);
  }
  return make_series(std::move(timestamps), std::move(prices), 1.0);
}

PriceSeries parse_ticks_file(const std::string& path, std::string_view field) {
  std::string content;
  if (path == "-") {
    content.assign(std::istreambuf_iterator<char>(std::cin),
                   std::istreambuf_iterator<char>());
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open input file '" + path + "'");
    content.assign(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>());
  }
  return parse_ticks(content, field);
}

PriceSeries rescale_time(const PriceSeries& series, double total) {
  if (!(total > 0.0)) {
    throw std::invalid_argument("rescale_time: total must be positive");
  }
  if (series.size() < 2) {
    throw std::invalid_argument("rescale_time: series needs at least 2 observations");
  }
  PriceSeries out = series;
  out.time_span = total;
  out.dt = total / static_cast<double>(series.size() - 1);
  return out;
}

SeriesSummary summary(const PriceSeries& series) {
  if (series.size() == 0) throw std::invalid_argument("summary: empty series");
  auto [mn, mx] = std::minmax_element(series.prices.begin(), series.prices.end());
  return SeriesSummary{*mn, *mx, series.size(), series.prices.front(),
                       series.prices.back()};
}

std::string summary_json(const SeriesSummary& s) {
  nlohmann::json j;
  j["min"] = s.min;
  j["max"] = s.max;
  j["n"] = s.n;
  j["first"] = s.first;
  j["last"] = s.last;
  return j.dump();
}

void write_series_csv(const PriceSeries& series, std::ostream& out) {
  out << "timestamp,open\n";
  char buf[64];
  for (std::size_t i = 0; i < series.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", series.timestamps[i],
                  series.prices[i]);
    out << buf;
  }
}

void write_series_csv_file(const PriceSeries& series, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  write_series_csv(series, out);
}

}  // namespace bubbles::market
