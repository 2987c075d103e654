"""Asset-price bubble detection from nonparametric diffusion volatility tails.

The heavy lifting lives in the compiled extension; this package re-exports
its surface and adds a small JSON convenience wrapper.
"""

import json as _json

from ._bubbles import (  # noqa: F401
    BoundedCurve,
    Classification,
    DetectResult,
    ExtrapolationModel,
    GridSpec,
    Knot,
    MSearchResult,
    PriceSeries,
    RunConfig,
    ScanRow,
    SeriesSummary,
    SimSpec,
    Verdict,
    VolPoint,
    VolatilityEstimate,
    alpha_from_m,
    asymptotic_limit,
    beta_fn,
    build_grid,
    check_positive,
    classify,
    confidence_interval,
    cubic_spline,
    detect_series,
    eval_extrapolated,
    eval_f,
    ground_truth_alpha,
    ground_truth_bubble,
    hyp2f1_terminating,
    integral_test,
    kernel_q,
    make_verdict,
    mark_reliable,
    optimize_m,
    parse_ticks,
    parse_ticks_file,
    reliability_filter,
    rescale_time,
    rkhs_interpolate,
    run_detect,
    simulate,
    smoothed_estimate,
    solve_coefficients,
    standard_normals,
    summary,
    summary_json,
    write_series_csv,
    zmirou_estimate,
)

__version__ = "0.1.0"


def detect_report(series, config=None):
    """Runs the full pipeline on a PriceSeries and returns the report dict."""
    result = detect_series(series, config if config is not None else RunConfig())
    return _json.loads(result.report_json)
