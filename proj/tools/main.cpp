#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "bubbles/bubble_verdict.hpp"
#include "bubbles/market_data.hpp"
#include "bubbles/pipeline.hpp"
#include "bubbles/sde_sim.hpp"

namespace {

void add_config_options(CLI::App* cmd, bubbles::pipeline::RunConfig& cfg) {
  cmd->add_option("--field", cfg.field, "price field (open|high|low|close)")
      ->capture_default_str();
  cmd->add_option("--time-span", cfg.time_span,
                  "model time assigned to the whole series")
      ->capture_default_str();
  cmd->add_option("--estimator", cfg.estimator,
                  "variance estimator (zmirou|smoothed)")
      ->capture_default_str();
  cmd->add_option("--min-visits", cfg.min_visits,
                  "visit threshold for reliable grid points")
      ->capture_default_str();
  cmd->add_option("--interpolator", cfg.interpolator,
                  "bounded-curve method (rkhs|spline)")
      ->capture_default_str();
  cmd->add_option("--tau", cfg.tau, "interpolation kernel decay parameter")
      ->capture_default_str();
  cmd->add_option("--smoothness", cfg.smoothness,
                  "extrapolation smoothness index n")
      ->capture_default_str();
  cmd->add_option("--m-min", cfg.m_lo, "lower end of the m search range")
      ->capture_default_str();
  cmd->add_option("--m-max", cfg.m_hi, "upper end of the m search range")
      ->capture_default_str();
  cmd->add_option("--mesh", cfg.mesh, "objective quadrature mesh points")
      ->capture_default_str();
  cmd->add_option("--epsilon", cfg.epsilon,
                  "half-width of the indeterminate band around alpha = 1")
      ->capture_default_str();
  cmd->add_option("--ci-level", cfg.ci_level, "confidence-interval level")
      ->capture_default_str();
  cmd->add_option("--integral-lower", cfg.integral_lower,
                  "lower bound a of the integral test (0 = first grid point)")
      ->capture_default_str();
  cmd->add_option("--split-factor", cfg.split_factor,
                  "integral split point as a multiple of the last knot")
      ->capture_default_str();
  cmd->add_option("--curve-mesh", cfg.curve_mesh,
                  "sample count for curve CSVs and positivity checks")
      ->capture_default_str();
  cmd->add_option("--grid-prefix", cfg.grid_prefix,
                  "keep only the first N reliable grid points (0 = all)")
      ->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "seed recorded in the report")
      ->capture_default_str();
  cmd->set_config("--config", "",
                  "flat key=value file; command-line flags take precedence");
}

void print_verdict(const bubbles::pipeline::DetectResult& res) {
  std::cout << "classification="
            << bubbles::verdict::classification_name(res.verdict.classification)
            << " alpha=" << res.verdict.alpha << " m=" << res.search.model.m
            << " M=" << res.search.model.knots.size()
            << " n=" << res.search.model.n
            << " interpolant=" << res.interpolant_used << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Asset-price bubble detection from diffusion volatility tails"};
  app.require_subcommand(1);

  bubbles::pipeline::RunConfig cfg;
  std::string input;
  std::string outdir = "out";
  bool print_summary = false;

  auto* detect = app.add_subcommand(
      "detect", "full pipeline: estimate, interpolate, extrapolate, report");
  detect->add_option("--input,-i", input, "price CSV file ('-' for stdin)")
      ->required();
  detect->add_option("--out,-o", outdir, "output directory")
      ->capture_default_str();
  detect->add_flag("--print-summary", print_summary,
                   "print a one-line JSON series summary");
  add_config_options(detect, cfg);

  auto* estimate = app.add_subcommand(
      "estimate", "grid + variance estimates -> estimate.csv");
  estimate->add_option("--input,-i", input, "price CSV file ('-' for stdin)")
      ->required();
  estimate->add_option("--out,-o", outdir, "output directory")
      ->capture_default_str();
  estimate->add_flag("--print-summary", print_summary,
                     "print a one-line JSON series summary");
  add_config_options(estimate, cfg);

  auto* interpolate = app.add_subcommand(
      "interpolate", "estimate.csv -> bounded curves -> curve.csv");
  interpolate->add_option("--dir,-d", outdir, "stage directory")->required();
  add_config_options(interpolate, cfg);

  auto* extrapolate = app.add_subcommand(
      "extrapolate",
      "estimate.csv -> m scan + model -> mscan.csv, extrapolation.csv, model.json");
  extrapolate->add_option("--dir,-d", outdir, "stage directory")->required();
  add_config_options(extrapolate, cfg);

  auto* report = app.add_subcommand(
      "report", "series + stage files -> verdict -> report.json");
  report->add_option("--input,-i", input, "price CSV file ('-' for stdin)")
      ->required();
  report->add_option("--dir,-d", outdir, "stage directory")->required();
  add_config_options(report, cfg);

  bubbles::sim::SimSpec spec;
  std::string sim_out;
  auto* simulate =
      app.add_subcommand("simulate", "Euler path with sigma(x) = sigma0 x^theta");
  simulate->add_option("--out,-o", sim_out, "output series CSV")->required();
  simulate->add_option("--sigma0", spec.sigma0, "diffusion scale")
      ->capture_default_str();
  simulate->add_option("--theta", spec.theta, "diffusion tail exponent")
      ->capture_default_str();
  simulate->add_option("--s0", spec.s0, "initial price")->capture_default_str();
  simulate->add_option("--steps", spec.steps, "number of observations")
      ->capture_default_str();
  simulate->add_option("--horizon", spec.horizon, "model time horizon")
      ->capture_default_str();
  simulate->add_option("--seed", spec.seed, "random seed")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (detect->parsed()) {
      auto res = bubbles::pipeline::run_detect(input, outdir, cfg);
      if (print_summary) {
        std::cout << bubbles::market::summary_json(res.summary) << '\n';
      }
      print_verdict(res);
      std::cout << "report written to "
                << (std::filesystem::path(outdir) / "report.json").string()
                << '\n';
    } else if (estimate->parsed()) {
      auto sm = bubbles::pipeline::run_estimate(input, outdir, cfg);
      if (print_summary) {
        std::cout << bubbles::market::summary_json(sm) << '\n';
      }
      std::cout << "estimate written to "
                << (std::filesystem::path(outdir) / "estimate.csv").string()
                << '\n';
    } else if (interpolate->parsed()) {
      bubbles::pipeline::run_interpolate(outdir, cfg);
      std::cout << "curve written to "
                << (std::filesystem::path(outdir) / "curve.csv").string()
                << '\n';
    } else if (extrapolate->parsed()) {
      bubbles::pipeline::run_extrapolate(outdir, cfg);
      std::cout << "model written to "
                << (std::filesystem::path(outdir) / "model.json").string()
                << '\n';
    } else if (report->parsed()) {
      auto rep = bubbles::pipeline::run_report(input, outdir, cfg);
      std::cout << "classification="
                << rep["verdict"]["classification"].get<std::string>()
                << " alpha=" << rep["verdict"]["alpha"].get<double>() << '\n';
      std::cout << "report written to "
                << (std::filesystem::path(outdir) / "report.json").string()
                << '\n';
    } else if (simulate->parsed()) {
      auto series = bubbles::sim::simulate(spec);
      bubbles::market::write_series_csv_file(series, sim_out);
      std::cout << "series written to " << sim_out << " (" << series.size()
                << " observations)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
