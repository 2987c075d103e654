#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bubbles/bubble_verdict.hpp"
#include "bubbles/interpolation.hpp"
#include "bubbles/market_data.hpp"
#include "bubbles/pipeline.hpp"
#include "bubbles/rkhs.hpp"
#include "bubbles/sde_sim.hpp"
#include "bubbles/vol_estimator.hpp"

namespace py = pybind11;
using namespace bubbles;

PYBIND11_MODULE(_bubbles, mod) {
  mod.doc() = "Bubble detection from nonparametric diffusion volatility tails";

  // market_data
  py::class_<market::PriceSeries>(mod, "PriceSeries")
      .def(py::init([](std::vector<double> ts, std::vector<double> prices,
                       double time_span) {
             return market::make_series(std::move(ts), std::move(prices),
                                        time_span);
           }),
           py::arg("timestamps"), py::arg("prices"), py::arg("time_span") = 1.0)
      .def_readonly("timestamps", &market::PriceSeries::timestamps)
      .def_readonly("prices", &market::PriceSeries::prices)
      .def_readonly("dt", &market::PriceSeries::dt)
      .def_readonly("time_span", &market::PriceSeries::time_span)
      .def("__len__", &market::PriceSeries::size);

  py::class_<market::SeriesSummary>(mod, "SeriesSummary")
      .def_readonly("min", &market::SeriesSummary::min)
      .def_readonly("max", &market::SeriesSummary::max)
      .def_readonly("n", &market::SeriesSummary::n)
      .def_readonly("first", &market::SeriesSummary::first)
      .def_readonly("last", &market::SeriesSummary::last);

  mod.def("parse_ticks", &market::parse_ticks, py::arg("text"),
          py::arg("field") = "open");
  mod.def("parse_ticks_file", &market::parse_ticks_file, py::arg("path"),
          py::arg("field") = "open");
  mod.def("rescale_time", &market::rescale_time, py::arg("series"),
          py::arg("total"));
  mod.def("summary", &market::summary, py::arg("series"));
  mod.def("summary_json", &market::summary_json, py::arg("summary"));
  mod.def("write_series_csv", &market::write_series_csv_file,
          py::arg("series"), py::arg("path"));

  // vol_estimator
  py::class_<vol::GridSpec>(mod, "GridSpec")
      .def_readonly("centers", &vol::GridSpec::centers)
      .def_readonly("half_width", &vol::GridSpec::half_width)
      .def_readonly("half_width_price", &vol::GridSpec::half_width_price);

  py::class_<vol::VolPoint>(mod, "VolPoint")
      .def_readonly("center", &vol::VolPoint::center)
      .def_readonly("visits", &vol::VolPoint::visits)
      .def_readonly("sigma_sq", &vol::VolPoint::sigma_sq)
      .def_readonly("ci_low", &vol::VolPoint::ci_low)
      .def_readonly("ci_high", &vol::VolPoint::ci_high)
      .def_readonly("estimated", &vol::VolPoint::estimated)
      .def_readonly("reliable", &vol::VolPoint::reliable);

  py::class_<vol::VolatilityEstimate>(mod, "VolatilityEstimate")
      .def_readonly("points", &vol::VolatilityEstimate::points)
      .def_readonly("estimator", &vol::VolatilityEstimate::estimator);

  mod.def("build_grid", &vol::build_grid, py::arg("series"));
  mod.def("zmirou_estimate", &vol::zmirou_estimate, py::arg("series"),
          py::arg("grid"));
  mod.def("smoothed_estimate", &vol::smoothed_estimate, py::arg("series"),
          py::arg("grid"));
  mod.def("confidence_interval", &vol::confidence_interval, py::arg("estimate"),
          py::arg("level"));
  mod.def("mark_reliable", &vol::mark_reliable, py::arg("estimate"),
          py::arg("min_visits"));
  mod.def("reliability_filter", &vol::reliability_filter, py::arg("estimate"),
          py::arg("min_visits"));

  // interpolation
  py::class_<interp::Knot>(mod, "Knot")
      .def(py::init<double, double>(), py::arg("x"), py::arg("sigma"))
      .def_readonly("x", &interp::Knot::x)
      .def_readonly("sigma", &interp::Knot::sigma);

  py::class_<interp::BoundedCurve>(mod, "BoundedCurve")
      .def("__call__", &interp::BoundedCurve::operator(), py::arg("x"))
      .def("raw", &interp::BoundedCurve::raw, py::arg("x"))
      .def_property_readonly("lo", &interp::BoundedCurve::lo)
      .def_property_readonly("hi", &interp::BoundedCurve::hi)
      .def_property_readonly("method", &interp::BoundedCurve::method)
      .def_property_readonly("knots", &interp::BoundedCurve::knots);

  mod.def("cubic_spline", &interp::cubic_spline, py::arg("knots"));
  mod.def("rkhs_interpolate", &interp::rkhs_interpolate, py::arg("knots"),
          py::arg("tau"));
  mod.def("check_positive", &interp::check_positive, py::arg("curve"),
          py::arg("mesh") = 512);

  // rkhs extrapolation
  mod.def("beta_fn", &rkhs::beta_fn, py::arg("a"), py::arg("b"));
  mod.def("hyp2f1_terminating", &rkhs::hyp2f1_terminating, py::arg("n"),
          py::arg("m"), py::arg("z"));
  mod.def("kernel_q", &rkhs::kernel_q, py::arg("n"), py::arg("m"), py::arg("x"),
          py::arg("y"));
  mod.def("solve_coefficients", &rkhs::solve_coefficients, py::arg("knots"),
          py::arg("values"), py::arg("n"), py::arg("m"));

  py::class_<rkhs::ExtrapolationModel>(mod, "ExtrapolationModel")
      .def(py::init([](std::vector<double> knots, std::vector<double> values,
                       int n, double m) {
             return rkhs::make_model(std::move(knots), std::move(values), n, m);
           }),
           py::arg("knots"), py::arg("values"), py::arg("n"), py::arg("m"))
      .def_readonly("n", &rkhs::ExtrapolationModel::n)
      .def_readonly("m", &rkhs::ExtrapolationModel::m)
      .def_readonly("knots", &rkhs::ExtrapolationModel::knots)
      .def_readonly("values", &rkhs::ExtrapolationModel::values)
      .def_readonly("coefficients", &rkhs::ExtrapolationModel::coeffs)
      .def("coeff_sum", &rkhs::ExtrapolationModel::coeff_sum);

  mod.def("eval_f", &rkhs::eval_f, py::arg("model"), py::arg("x"));
  mod.def(
      "eval_extrapolated",
      [](const rkhs::ExtrapolationModel& model, double x) {
        const auto e = rkhs::eval_extrapolated(model, x);
        return py::make_tuple(e.f, e.sigma);
      },
      py::arg("model"), py::arg("x"));
  mod.def("asymptotic_limit", &rkhs::asymptotic_limit, py::arg("model"));

  py::class_<rkhs::ScanRow>(mod, "ScanRow")
      .def_readonly("m", &rkhs::ScanRow::m)
      .def_readonly("objective", &rkhs::ScanRow::objective)
      .def_readonly("feasible", &rkhs::ScanRow::feasible);

  py::class_<rkhs::MSearchResult>(mod, "MSearchResult")
      .def_readonly("m", &rkhs::MSearchResult::m)
      .def_readonly("objective", &rkhs::MSearchResult::objective)
      .def_readonly("model", &rkhs::MSearchResult::model)
      .def_readonly("scan", &rkhs::MSearchResult::scan);

  mod.def("optimize_m", &rkhs::optimize_m, py::arg("knots"), py::arg("values"),
          py::arg("n"), py::arg("sigma_b"), py::arg("m_lo"), py::arg("m_hi"),
          py::arg("mesh") = 200);

  // bubble_verdict
  py::enum_<verdict::Classification>(mod, "Classification")
      .value("Bubble", verdict::Classification::Bubble)
      .value("NoBubble", verdict::Classification::NoBubble)
      .value("Indeterminate", verdict::Classification::Indeterminate);

  mod.def("alpha_from_m", &verdict::alpha_from_m, py::arg("m"));
  mod.def("classify", &verdict::classify, py::arg("alpha"),
          py::arg("epsilon") = 0.05);
  mod.def(
      "integral_test",
      [](const rkhs::ExtrapolationModel& model, double a, double split) {
        const auto r = verdict::integral_test(model, a, split);
        return py::make_tuple(r.finite, r.value_or_bound);
      },
      py::arg("model"), py::arg("a"), py::arg("split"));

  py::class_<verdict::Verdict>(mod, "Verdict")
      .def_readonly("alpha", &verdict::Verdict::alpha)
      .def_property_readonly("classification",
                             [](const verdict::Verdict& v) {
                               return verdict::classification_name(
                                   v.classification);
                             })
      .def_readonly("epsilon", &verdict::Verdict::epsilon)
      .def_readonly("integral_finite", &verdict::Verdict::integral_finite)
      .def_readonly("integral_value_or_bound",
                    &verdict::Verdict::integral_value_or_bound);

  mod.def("make_verdict", &verdict::make_verdict, py::arg("model"),
          py::arg("epsilon"), py::arg("a"), py::arg("split"));

  // sde_sim
  py::class_<sim::SimSpec>(mod, "SimSpec")
      .def(py::init([](double sigma0, double theta, double s0,
                       std::size_t steps, double horizon, std::uint64_t seed) {
             sim::SimSpec spec;
             spec.sigma0 = sigma0;
             spec.theta = theta;
             spec.s0 = s0;
             spec.steps = steps;
             spec.horizon = horizon;
             spec.seed = seed;
             return spec;
           }),
           py::arg("sigma0") = 0.2, py::arg("theta") = 1.0,
           py::arg("s0") = 100.0, py::arg("steps") = 1000,
           py::arg("horizon") = 1.0, py::arg("seed") = 1)
      .def_readwrite("sigma0", &sim::SimSpec::sigma0)
      .def_readwrite("theta", &sim::SimSpec::theta)
      .def_readwrite("s0", &sim::SimSpec::s0)
      .def_readwrite("steps", &sim::SimSpec::steps)
      .def_readwrite("horizon", &sim::SimSpec::horizon)
      .def_readwrite("seed", &sim::SimSpec::seed);

  mod.def("simulate", &sim::simulate, py::arg("spec"));
  mod.def("standard_normals", &sim::standard_normals, py::arg("seed"),
          py::arg("count"));
  mod.def("ground_truth_alpha", &sim::ground_truth_alpha, py::arg("spec"));
  mod.def("ground_truth_bubble", &sim::ground_truth_bubble, py::arg("spec"));

  // pipeline
  py::class_<pipeline::RunConfig>(mod, "RunConfig")
      .def(py::init<>())
      .def_readwrite("field", &pipeline::RunConfig::field)
      .def_readwrite("time_span", &pipeline::RunConfig::time_span)
      .def_readwrite("estimator", &pipeline::RunConfig::estimator)
      .def_readwrite("min_visits", &pipeline::RunConfig::min_visits)
      .def_readwrite("interpolator", &pipeline::RunConfig::interpolator)
      .def_readwrite("tau", &pipeline::RunConfig::tau)
      .def_readwrite("smoothness", &pipeline::RunConfig::smoothness)
      .def_readwrite("m_lo", &pipeline::RunConfig::m_lo)
      .def_readwrite("m_hi", &pipeline::RunConfig::m_hi)
      .def_readwrite("mesh", &pipeline::RunConfig::mesh)
      .def_readwrite("epsilon", &pipeline::RunConfig::epsilon)
      .def_readwrite("ci_level", &pipeline::RunConfig::ci_level)
      .def_readwrite("integral_lower", &pipeline::RunConfig::integral_lower)
      .def_readwrite("split_factor", &pipeline::RunConfig::split_factor)
      .def_readwrite("curve_mesh", &pipeline::RunConfig::curve_mesh)
      .def_readwrite("grid_prefix", &pipeline::RunConfig::grid_prefix)
      .def_readwrite("seed", &pipeline::RunConfig::seed);

  py::class_<pipeline::DetectResult>(mod, "DetectResult")
      .def_readonly("summary", &pipeline::DetectResult::summary)
      .def_readonly("grid", &pipeline::DetectResult::grid)
      .def_readonly("estimate", &pipeline::DetectResult::estimate)
      .def_readonly("interpolant_used",
                    &pipeline::DetectResult::interpolant_used)
      .def_readonly("search", &pipeline::DetectResult::search)
      .def_readonly("verdict", &pipeline::DetectResult::verdict)
      .def_property_readonly("report_json",
                             [](const pipeline::DetectResult& r) {
                               return r.report.dump(2);
                             });

  mod.def("detect_series", &pipeline::detect_series, py::arg("series"),
          py::arg("config") = pipeline::RunConfig{});
  mod.def("run_detect", &pipeline::run_detect, py::arg("input"),
          py::arg("outdir"), py::arg("config") = pipeline::RunConfig{});
}
