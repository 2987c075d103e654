#include "bubbles/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace bubbles::pipeline {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
auto stage(const char* name, F&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string(name) + ": " + e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<double> parse_row(const std::string& line, std::size_t expect,
                              const std::string& path, std::size_t line_no) {
  std::vector<double> cells;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      const std::string cell = line.substr(start, i - start);
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end != cell.c_str() + cell.size() || cell.empty()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": non-numeric cell '" + cell + "'");
      }
      cells.push_back(v);
      start = i + 1;
    }
  }
  if (cells.size() != expect) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) +
                             ": expected " + std::to_string(expect) +
                             " columns, got " + std::to_string(cells.size()));
  }
  return cells;
}

void expect_header(const std::vector<std::string>& lines,
                   const std::string& header, const std::string& path) {
  if (lines.empty() || lines.front() != header) {
    throw std::runtime_error(path + ": expected header '" + header + "'");
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

void validate_config(const RunConfig& cfg) {
  if (cfg.estimator != "zmirou" && cfg.estimator != "smoothed") {
    throw std::invalid_argument("config: estimator must be zmirou or smoothed");
  }
  if (cfg.interpolator != "rkhs" && cfg.interpolator != "spline") {
    throw std::invalid_argument("config: interpolator must be rkhs or spline");
  }
  if (!(cfg.time_span > 0.0)) throw std::invalid_argument("config: time_span must be positive");
  if (!(cfg.min_visits >= 1.0)) throw std::invalid_argument("config: min_visits must be >= 1");
  if (!(cfg.tau > 0.0)) throw std::invalid_argument("config: tau must be positive");
  if (cfg.smoothness < 1) throw std::invalid_argument("config: smoothness must be >= 1");
  if (!(cfg.m_lo > 0.0 && cfg.m_hi > cfg.m_lo)) {
    throw std::invalid_argument("config: invalid m range");
  }
  if (cfg.mesh < 2) throw std::invalid_argument("config: mesh must be >= 2");
  if (!(cfg.epsilon >= 0.0)) throw std::invalid_argument("config: epsilon must be >= 0");
  if (!(cfg.ci_level > 0.0 && cfg.ci_level < 1.0)) {
    throw std::invalid_argument("config: ci_level must be in (0, 1)");
  }
  if (!(cfg.integral_lower >= 0.0)) {
    throw std::invalid_argument("config: integral_lower must be >= 0");
  }
  if (!(cfg.split_factor >= 1.0)) {
    throw std::invalid_argument("config: split_factor must be >= 1");
  }
  if (cfg.curve_mesh < 2) throw std::invalid_argument("config: curve_mesh must be >= 2");
  if (cfg.grid_prefix < 0) throw std::invalid_argument("config: grid_prefix must be >= 0");
}

nlohmann::json config_json(const RunConfig& cfg) {
  return nlohmann::json{{"field", cfg.field},
                        {"time_span", cfg.time_span},
                        {"estimator", cfg.estimator},
                        {"min_visits", cfg.min_visits},
                        {"interpolator", cfg.interpolator},
                        {"tau", cfg.tau},
                        {"smoothness", cfg.smoothness},
                        {"m_lo", cfg.m_lo},
                        {"m_hi", cfg.m_hi},
                        {"mesh", cfg.mesh},
                        {"epsilon", cfg.epsilon},
                        {"ci_level", cfg.ci_level},
                        {"integral_lower", cfg.integral_lower},
                        {"split_factor", cfg.split_factor},
                        {"curve_mesh", cfg.curve_mesh},
                        {"grid_prefix", cfg.grid_prefix},
                        {"seed", cfg.seed},
                        {"rng", "mt19937_64+box-muller"}};
}

void write_estimate_csv(const std::string& path,
                        const vol::VolatilityEstimate& est) {
  {
    auto out = open_out(path);
    out << "center,visits,sigma_sq,ci_low,ci_high,reliable\n";
    for (const auto& p : est.points) {
      out << fmt(p.center) << ',' << fmt(p.visits) << ',' << fmt(p.sigma_sq)
          << ',' << fmt(p.ci_low) << ',' << fmt(p.ci_high) << ','
          << (p.reliable ? 1 : 0) << '\n';
    }
  }
  read_estimate_csv(path);  // schema check on write
}

vol::VolatilityEstimate read_estimate_csv(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "center,visits,sigma_sq,ci_low,ci_high,reliable", path);
  vol::VolatilityEstimate est;
  est.estimator = "from-file";
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_row(lines[i], 6, path, i + 1);
    vol::VolPoint p;
    p.center = row[0];
    p.visits = row[1];
    p.sigma_sq = row[2];
    p.ci_low = row[3];
    p.ci_high = row[4];
    p.reliable = row[5] != 0.0;
    p.estimated = !std::isnan(p.sigma_sq);
    if (i > 1 && !(p.center > est.points.back().center)) {
      throw std::runtime_error(path + ": centers not ascending");
    }
    est.points.push_back(p);
  }
  if (est.points.empty()) throw std::runtime_error(path + ": no rows");
  return est;
}

namespace {

void validate_table(const std::string& path, const std::string& header,
                    std::size_t columns) {
  const auto lines = read_lines(path);
  expect_header(lines, header, path);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    parse_row(lines[i], columns, path, i + 1);
  }
}

}  // namespace

void write_curve_csv(const std::string& path, const std::vector<double>& xs,
                     const std::vector<double>& spline_vals,
                     const std::vector<double>& rkhs_vals) {
  {
    auto out = open_out(path);
    out << "x,sigma_spline,sigma_rkhs\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
      out << fmt(xs[i]) << ',' << fmt(spline_vals[i]) << ','
          << fmt(rkhs_vals[i]) << '\n';
    }
  }
  validate_table(path, "x,sigma_spline,sigma_rkhs", 3);
}

void write_mscan_csv(const std::string& path,
                     const std::vector<rkhs::ScanRow>& scan) {
  {
    auto out = open_out(path);
    out << "m,J,feasible\n";
    for (const auto& row : scan) {
      out << fmt(row.m) << ',' << fmt(row.objective) << ','
          << (row.feasible ? 1 : 0) << '\n';
    }
  }
  read_mscan_csv(path);
}

std::vector<rkhs::ScanRow> read_mscan_csv(const std::string& path) {
  const auto lines = read_lines(path);
  expect_header(lines, "m,J,feasible", path);
  std::vector<rkhs::ScanRow> scan;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto row = parse_row(lines[i], 3, path, i + 1);
    scan.push_back(rkhs::ScanRow{row[0], row[1], row[2] != 0.0});
  }
  return scan;
}

void write_extrapolation_csv(const std::string& path,
                             const rkhs::ExtrapolationModel& model, double lo,
                             double hi, int mesh) {
  {
    auto out = open_out(path);
    out << "x,f,sigma\n";
    for (int i = 0; i < mesh; ++i) {
      const double x =
          lo * std::pow(hi / lo, static_cast<double>(i) /
                                     static_cast<double>(mesh - 1));
      const double f = rkhs::eval_f(model, x);
      const double sigma = f > 0.0 ? 1.0 / std::sqrt(f) : kNaN;
      out << fmt(x) << ',' << fmt(f) << ',' << fmt(sigma) << '\n';
    }
  }
  validate_table(path, "x,f,sigma", 3);
}

void write_model_json(const std::string& path,
                      const rkhs::ExtrapolationModel& model) {
  nlohmann::json j{{"schema_version", 1},
                   {"n", model.n},
                   {"m", model.m},
                   {"knots", model.knots},
                   {"values", model.values},
                   {"coefficients", model.coeffs}};
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  out.close();
  read_model_json(path);
}

rkhs::ExtrapolationModel read_model_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": invalid JSON: " + e.what());
  }
  for (const char* key : {"n", "m", "knots", "values", "coefficients"}) {
    if (!j.contains(key)) {
      throw std::runtime_error(path + ": model JSON missing key '" +
                               std::string(key) + "'");
    }
  }
  rkhs::ExtrapolationModel model;
  model.n = j["n"].get<int>();
  model.m = j["m"].get<double>();
  model.knots = j["knots"].get<std::vector<double>>();
  model.values = j["values"].get<std::vector<double>>();
  model.coeffs = j["coefficients"].get<std::vector<double>>();
  if (model.knots.size() != model.values.size() ||
      model.knots.size() != model.coeffs.size() || model.knots.empty()) {
    throw std::runtime_error(path + ": inconsistent model arrays");
  }
  return model;
}

EstimateStage compute_estimate(const market::PriceSeries& raw,
                               const RunConfig& cfg) {
  validate_config(cfg);
  return stage("estimate", [&] {
    EstimateStage st;
    st.series = market::rescale_time(raw, cfg.time_span);
    st.summary = market::summary(st.series);
    st.grid = vol::build_grid(st.series);
    st.estimate = cfg.estimator == "zmirou"
                      ? vol::zmirou_estimate(st.series, st.grid)
                      : vol::smoothed_estimate(st.series, st.grid);
    st.estimate = vol::confidence_interval(st.estimate, cfg.ci_level);
    st.estimate = vol::mark_reliable(st.estimate, cfg.min_visits);
    return st;
  });
}

KnotSet knots_from_estimate(const vol::VolatilityEstimate& est,
                            const RunConfig& cfg) {
  return stage("knots", [&] {
    KnotSet ks;
    ks.retained = vol::reliability_filter(est, cfg.min_visits);
    if (cfg.grid_prefix > 0 &&
        ks.retained.points.size() > static_cast<std::size_t>(cfg.grid_prefix)) {
      ks.retained.points.resize(cfg.grid_prefix);
    }
    if (ks.retained.points.size() < 2) {
      throw std::runtime_error("need at least 2 reliable grid points, have " +
                               std::to_string(ks.retained.points.size()));
    }
    for (const auto& p : ks.retained.points) {
      if (!(p.sigma_sq > 0.0)) {
        throw std::runtime_error("zero variance estimate at center " +
                                 std::to_string(p.center) +
                                 "; cannot form 1/sigma^2");
      }
      ks.sigma_knots.push_back(interp::Knot{p.center, std::sqrt(p.sigma_sq)});
      ks.xs.push_back(p.center);
      ks.f_values.push_back(1.0 / p.sigma_sq);
    }
    return ks;
  });
}

const interp::BoundedCurve& Curves::selected() const {
  if (used == "spline") {
    if (!spline) throw std::runtime_error("spline curve unavailable");
    return *spline;
  }
  if (!rkhs) throw std::runtime_error("rkhs curve unavailable");
  return *rkhs;
}

Curves build_curves(const std::vector<interp::Knot>& knots,
                    const RunConfig& cfg) {
  return stage("interpolate", [&] {
    Curves curves;
    std::string spline_err, rkhs_err;
    try {
      curves.spline = interp::cubic_spline(knots);
    } catch (const std::exception& e) {
      spline_err = e.what();
    }
    try {
      curves.rkhs = interp::rkhs_interpolate(knots, cfg.tau);
    } catch (const std::exception& e) {
      rkhs_err = e.what();
    }
    if (cfg.interpolator == "spline") {
      if (!curves.spline) throw std::runtime_error(spline_err);
      curves.used = "spline";
    } else if (curves.rkhs) {
      curves.used = "rkhs";
    } else if (curves.spline) {
      curves.used = "spline";  // conditioning fallback
    } else {
      throw std::runtime_error(rkhs_err);
    }
    interp::check_positive(curves.selected(), cfg.curve_mesh);
    return curves;
  });
}

namespace {

nlohmann::json provenance_json(const EstimateStage& st, const KnotSet& ks,
                               const std::string& used,
                               const rkhs::ExtrapolationModel& model) {
  return nlohmann::json{{"M", model.knots.size()},
                        {"smoothness_n", model.n},
                        {"m", model.m},
                        {"estimator", st.estimate.estimator},
                        {"grid_points", st.grid.centers.size()},
                        {"half_width", st.grid.half_width},
                        {"half_width_price", st.grid.half_width_price},
                        {"retained_points", ks.retained.points.size()},
                        {"interpolant_used", used}};
}

verdict::Verdict verdict_for(const rkhs::ExtrapolationModel& model,
                             const RunConfig& cfg) {
  const double a =
      cfg.integral_lower > 0.0 ? cfg.integral_lower : model.knots.front();
  const double split = cfg.split_factor * model.knots.back();
  return verdict::make_verdict(model, cfg.epsilon, a, split);
}

}  // namespace

DetectResult detect_series(const market::PriceSeries& raw,
                           const RunConfig& cfg) {
  DetectResult res;
  EstimateStage st = compute_estimate(raw, cfg);
  res.summary = st.summary;
  res.grid = st.grid;
  res.estimate = st.estimate;
  res.knots = knots_from_estimate(st.estimate, cfg);
  Curves curves = build_curves(res.knots.sigma_knots, cfg);
  res.interpolant_used = curves.used;
  res.search = stage("extrapolate", [&] {
    return rkhs::optimize_m(res.knots.xs, res.knots.f_values, cfg.smoothness,
                            curves.selected(), cfg.m_lo, cfg.m_hi, cfg.mesh);
  });
  res.verdict = stage("verdict", [&] { return verdict_for(res.search.model, cfg); });
  res.report = verdict::report(
      res.summary, res.estimate, res.search.model, res.verdict,
      config_json(cfg), verdict::ReportFiles{},
      provenance_json(st, res.knots, curves.used, res.search.model));
  return res;
}

market::SeriesSummary run_estimate(const std::string& input,
                                   const std::string& outdir,
                                   const RunConfig& cfg) {
  const auto raw = stage("parse", [&] {
    return market::parse_ticks_file(input, cfg.field);
  });
  EstimateStage st = compute_estimate(raw, cfg);
  std::filesystem::create_directories(outdir);
  write_estimate_csv(join(outdir, "estimate.csv"), st.estimate);
  return st.summary;
}

void run_interpolate(const std::string& outdir, const RunConfig& cfg) {
  validate_config(cfg);
  const auto est = read_estimate_csv(join(outdir, "estimate.csv"));
  const KnotSet ks = knots_from_estimate(est, cfg);
  const Curves curves = build_curves(ks.sigma_knots, cfg);
  const double lo = ks.sigma_knots.front().x;
  const double hi = ks.sigma_knots.back().x;
  std::vector<double> xs(cfg.curve_mesh), sp(cfg.curve_mesh), rk(cfg.curve_mesh);
  for (int i = 0; i < cfg.curve_mesh; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(cfg.curve_mesh - 1);
    sp[i] = curves.spline ? curves.spline->raw(xs[i]) : kNaN;
    rk[i] = curves.rkhs ? curves.rkhs->raw(xs[i]) : kNaN;
  }
  write_curve_csv(join(outdir, "curve.csv"), xs, sp, rk);
}

void run_extrapolate(const std::string& outdir, const RunConfig& cfg) {
  validate_config(cfg);
  const auto est = read_estimate_csv(join(outdir, "estimate.csv"));
  const KnotSet ks = knots_from_estimate(est, cfg);
  const Curves curves = build_curves(ks.sigma_knots, cfg);
  const auto search = stage("extrapolate", [&] {
    return rkhs::optimize_m(ks.xs, ks.f_values, cfg.smoothness,
                            curves.selected(), cfg.m_lo, cfg.m_hi, cfg.mesh);
  });
  write_mscan_csv(join(outdir, "mscan.csv"), search.scan);
  write_extrapolation_csv(join(outdir, "extrapolation.csv"), search.model,
                          ks.xs.front() / 4.0,
                          cfg.split_factor * ks.xs.back(), cfg.curve_mesh);
  write_model_json(join(outdir, "model.json"), search.model);
}

nlohmann::json run_report(const std::string& input, const std::string& outdir,
                          const RunConfig& cfg) {
  validate_config(cfg);
  const auto raw = stage("parse", [&] {
    return market::parse_ticks_file(input, cfg.field);
  });
  EstimateStage st = compute_estimate(raw, cfg);
  auto est = read_estimate_csv(join(outdir, "estimate.csv"));
  est.estimator = cfg.estimator;  // the CSV schema does not carry the label
  const KnotSet ks = knots_from_estimate(est, cfg);
  const Curves curves = build_curves(ks.sigma_knots, cfg);
  const auto model = read_model_json(join(outdir, "model.json"));
  const auto vd = stage("verdict", [&] { return verdict_for(model, cfg); });
  nlohmann::json rep =
      verdict::report(st.summary, est, model, vd, config_json(cfg),
                      verdict::ReportFiles{},
                      provenance_json(st, ks, curves.used, model));
  auto out = open_out(join(outdir, "report.json"));
  out << rep.dump(2) << '\n';
  return rep;
}

DetectResult run_detect(const std::string& input, const std::string& outdir,
                        const RunConfig& cfg) {
  const auto raw = stage("parse", [&] {
    return market::parse_ticks_file(input, cfg.field);
  });
  DetectResult res = detect_series(raw, cfg);
  std::filesystem::create_directories(outdir);
  write_estimate_csv(join(outdir, "estimate.csv"), res.estimate);

  const double lo = res.knots.sigma_knots.front().x;
  const double hi = res.knots.sigma_knots.back().x;
  const Curves curves = build_curves(res.knots.sigma_knots, cfg);
  std::vector<double> xs(cfg.curve_mesh), sp(cfg.curve_mesh), rk(cfg.curve_mesh);
  for (int i = 0; i < cfg.curve_mesh; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                     static_cast<double>(cfg.curve_mesh - 1);
    sp[i] = curves.spline ? curves.spline->raw(xs[i]) : kNaN;
    rk[i] = curves.rkhs ? curves.rkhs->raw(xs[i]) : kNaN;
  }
  write_curve_csv(join(outdir, "curve.csv"), xs, sp, rk);
  write_mscan_csv(join(outdir, "mscan.csv"), res.search.scan);
  write_extrapolation_csv(join(outdir, "extrapolation.csv"), res.search.model,
                          res.knots.xs.front() / 4.0,
                          cfg.split_factor * res.knots.xs.back(),
                          cfg.curve_mesh);
  write_model_json(join(outdir, "model.json"), res.search.model);
  auto out = open_out(join(outdir, "report.json"));
  out << res.report.dump(2) << '\n';
  return res;
}

}  // namespace bubbles::pipeline
