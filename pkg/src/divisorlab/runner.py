"""Experiment execution: from a validated config to CSV + JSON reports.

Every experiment writes two files into the configured output directory:
a flat CSV of plot-ready rows and a JSON report carrying the config
echo, wall time, library version and any nested results.  CSV content
is a pure function of the config (floats via repr, fixed row order,
fixed line endings); the only run-dependent field is the timestamp in
the JSON header.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path

from . import counting, moments, omega, voronoi
from .cache import cache_table
from .config import ExperimentConfig
from .delta import DeltaEvaluator


@dataclass(frozen=True)
class RunArtifacts:
    """Where one experiment run put its outputs."""

    csv_path: Path
    json_path: Path


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def _evaluator(cfg: ExperimentConfig) -> DeltaEvaluator:
    handle = cache_table(cfg.k, cfg.limit, cfg.cache_dir)
    return DeltaEvaluator.for_k(cfg.k, cfg.limit, table=handle.table)


def _run_sieve(cfg: ExperimentConfig):
    handle = cache_table(cfg.k, cfg.limit, cfg.cache_dir)
    header = ["k", "limit", "size_bytes", "crc32"]
    rows = [(cfg.k, cfg.limit, handle.size_bytes, handle.checksum)]
    return header, rows, {"path": str(handle.path)}


def _run_delta(cfg: ExperimentConfig):
    ev = _evaluator(cfg)
    power = (cfg.k - 1) / (2.0 * cfg.k)
    rows = []
    for x in cfg.x_list:
        d = ev.delta(x)
        rows.append((x, d, abs(d) / x**power))
    return ["x", "delta", "ratio_power"], rows, {}


def _run_voronoi(cfg: ExperimentConfig):
    ev = _evaluator(cfg)
    rows = []
    slopes = {}
    for x in cfg.x_list:
        profile = voronoi.truncation_error_profile(
            cfg.k, x, cfg.sample_count, cfg.n_list, cfg.rng_seed, evaluator=ev
        )
        for N, rms, worst in profile.rows:
            rows.append((cfg.k, N, x, cfg.sample_count, rms, worst,
                         profile.slope))
        slopes[repr(float(x))] = profile.slope
    header = ["k", "N", "X", "sample_count", "rms_error", "max_error",
              "fitted_slope"]
    return header, rows, {"slopes": slopes}


def _run_moments(cfg: ExperimentConfig):
    ev = _evaluator(cfg)
    header = ["k", "m", "a", "b", "value", "normalization", "order"]
    rows = []
    extra = {}
    if len(cfg.x_list) >= 4:
        fit = moments.fit_moment_constant(ev, cfg.m, cfg.x_list, order=cfg.order)
        for X, normalized in fit.residual_series:
            rows.append((cfg.k, cfg.m, 1.0, X, normalized * X**fit.exponent_fixed,
                         normalized, cfg.order))
        extra = {
            "fitted_constant": fit.fitted_constant,
            "exponent": fit.exponent_fixed,
            "series": [list(pair) for pair in fit.residual_series],
        }
    else:
        for X in cfg.x_list:
            res = moments.moment_integral(ev, cfg.m, 1.0, X, order=cfg.order)
            rows.append((res.k, res.m, res.a, res.b, res.value,
                         res.normalization, res.quadrature_order))
    return header, rows, extra


def _run_short_interval(cfg: ExperimentConfig):
    ev = _evaluator(cfg)
    header = ["k", "x", "h", "value", "term_linear", "term_saturated",
              "envelope", "ratio"]
    rows = []
    for x in cfg.x_list:
        for h in cfg.h_list:
            value, (t1, t2) = moments.short_interval_fourth_moment(
                ev, x, h, order=cfg.order
            )
            envelope = math.log(x) ** 3 * (t1 + t2)
            rows.append((cfg.k, x, h, value, t1, t2, envelope, value / envelope))
    return header, rows, {}


def _run_count(cfg: ExperimentConfig):
    results = []
    for N in cfg.n_list:
        for d in cfg.delta_list:
            results.append(counting.count_2l_tuples(cfg.k, cfg.l, int(N), d))
    report = counting.bound_report(results)
    header = ["k", "l", "N", "delta", "count", "bound_main", "bound_diag",
              "ratio", "flagged_boundary_pairs"]
    return header, list(report.rows), {"trend_slope": report.trend_slope}


def _run_omega(cfg: ExperimentConfig):
    ev = _evaluator(cfg)
    x_max = int(cfg.x_list[0]) if cfg.x_list else cfg.limit
    scan = omega.scan_extrema(ev, x_max, record_top=10)
    header = ["x", "delta_value", "ratio_power", "ratio_G", "sign"]
    rows = [
        (r.x, r.delta_value, r.ratio_power, r.ratio_G, r.sign)
        for r in scan.records
    ]
    try:
        alpha = omega.estimate_alpha(scan.envelope, x_min_fit=100.0)
    except Exception:
        alpha = None
    extra = {
        "alpha_estimate": alpha,
        "alpha_floor": 0.25,
        "alpha_huxley": 131.0 / 416.0,
        "top_records": [asdict(r) for r in scan.records],
        "longest_positive_run": scan.longest_positive_run,
        "longest_negative_run": scan.longest_negative_run,
        "zero_count": scan.zero_count,
    }
    return header, rows, extra


def _run_shiu(cfg: ExperimentConfig):
    handle = cache_table(2, cfg.limit, cfg.cache_dir)
    rows = []
    worst = 0.0
    for x in cfg.x_list:
        for h in cfg.h_list:
            total, ratio = omega.shiu_check(handle.table, x, h)
            worst = max(worst, ratio)
            rows.append((x, h, total, ratio))
    return ["x", "h", "sum", "ratio"], rows, {"max_ratio": worst}


_RUNNERS = {
    "sieve": _run_sieve,
    "delta": _run_delta,
    "voronoi": _run_voronoi,
    "moments": _run_moments,
    "short-interval": _run_short_interval,
    "count": _run_count,
    "omega": _run_omega,
    "shiu": _run_shiu,
}


def run_experiment(cfg: ExperimentConfig) -> RunArtifacts:
    """Validate, execute and report one experiment."""
    from . import __version__

    cfg.require_valid()
    out_dir = Path(cfg.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    header, rows, extra = _RUNNERS[cfg.experiment](cfg)
    elapsed = time.perf_counter() - started

    csv_path = out_dir / f"{cfg.experiment}.csv"
    _write_csv(csv_path, header, rows)

    json_path = out_dir / f"{cfg.experiment}.json"
    report = {
        "experiment": cfg.experiment,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "wall_time_seconds": elapsed,
        "version": __version__,
        "config": asdict(cfg),
        "results": extra,
    }
    with open(json_path, "w") as fh:
        json.dump(report, fh, indent=2, default=_json_default)
        fh.write("\n")
    return RunArtifacts(csv_path=csv_path, json_path=json_path)


def _json_default(value):
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    return repr(value)
