"""Acceptance gate: eleven end-to-end checks, one summary line each.

Every test computes its full evidence first, records one PASS/FAIL
line through the shared recorder (so the terminal summary always lists
all eleven), and only then asserts.  Two checks fail honestly at
desk scale; their assertion messages carry the measured numbers.
"""

import math
import time

import numpy as np
import pytest

from divisorlab import DeltaEvaluator, sieve_dk
from divisorlab import counting, main_term, moments, omega, voronoi
from divisorlab.config import ExperimentConfig
from divisorlab.divisor_core import summatory_dk
from divisorlab.runner import run_experiment


def _enumeration_oracle(k: int, limit: int) -> np.ndarray:
    """d_k by repeated divisor-sum passes, independent of the sieve."""
    counts = np.zeros(limit + 1, dtype=np.int64)
    counts[1:] = 1
    for _ in range(k - 1):
        out = np.zeros(limit + 1, dtype=np.int64)
        for d in range(1, limit + 1):
            out[d::d] += counts[d]
        counts = out
    return counts


def test_criterion_01_divisor_exactness(criterion):
    import sympy

    t0 = time.monotonic()
    tables = {k: sieve_dk(k, 10**6) for k in (2, 3, 4)}

    small_ok = all(
        np.array_equal(tables[k].values[: 10**4 + 1],
                       _enumeration_oracle(k, 10**4))
        for k in (2, 3, 4)
    )

    rng = np.random.default_rng(1)
    ns = rng.integers(1, 10**6 + 1, size=1000)
    factored = {int(n): sympy.factorint(int(n)) for n in set(ns.tolist())}
    random_ok = True
    for k in (2, 3, 4):
        for n in ns:
            expect = math.prod(
                math.comb(e + k - 1, k - 1) for e in factored[int(n)].values()
            )
            if tables[k].d(int(n)) != expect:
                random_ok = False

    hyper_ok = True
    for k, top, count in ((2, 10**6, 400), (3, 10**5, 400)):
        xs = list(rng.integers(1, top + 1, size=count)) + [top]
        for x in xs:
            if summatory_dk(k, float(x), method="hyperbola") != int(
                tables[k].prefix[int(x)]
            ):
                hyper_ok = False

    elapsed = time.monotonic() - t0
    ok = small_ok and random_ok and hyper_ok and elapsed < 30.0
    criterion(
        1,
        ok,
        f"sieve = enumeration oracle to 1e4 and factorisation oracle at "
        f"1000 random n <= 1e6 (k=2,3,4); hyperbola prefix-exact at 401 "
        f"points each (k=2 to 1e6, k=3 to 1e5); {elapsed:.1f}s < 30s",
    )
    assert small_ok and random_ok and hyper_ok
    assert elapsed < 30.0


def test_criterion_02_main_term(criterion, ev2_big):
    rng = np.random.default_rng(2)
    mids, rmss = [], []
    for decade in range(3, 7):
        xs = 10.0 ** rng.uniform(decade, decade + 1, 4096)
        scaled = ev2_big.delta_many(xs) / xs**0.25
        mids.append(10.0 ** (decade + 0.5))
        rmss.append(float(np.sqrt(np.mean(scaled**2))))
    drift = float(np.polyfit(np.log(mids), np.log(rmss), 1)[0])
    band_ok = all(0.6 <= r <= 1.6 for r in rmss) and abs(drift) <= 0.05

    oracle = main_term.residue_main_term_coeffs(3)
    fitted = main_term.integrated_lsq_coeffs(sieve_dk(3, 10**6))
    rel = max(abs(a - b) / abs(a) for a, b in zip(oracle, fitted))
    coeff_ok = rel <= 5e-7

    criterion(
        2,
        band_ok and coeff_ok,
        f"k=2 per-decade rms of scaled error "
        f"{', '.join(f'{r:.3f}' for r in rmss)} in [0.6, 1.6], drift "
        f"{drift:+.4f} (cap 0.05); k=3 coefficient agreement {rel:.1e} "
        f"(cap 5e-7)",
    )
    assert band_ok
    assert coeff_ok


def test_criterion_03_truncation_decay(criterion, ev2_big):
    t0 = time.monotonic()
    p2 = voronoi.truncation_error_profile(
        2, 10**5, 256, [16, 64, 256, 1024], 0, evaluator=ev2_big
    )
    ev3 = DeltaEvaluator.for_k(3, 2 * 10**5 + 1)
    p3 = voronoi.truncation_error_profile(
        3, 10**5, 256, [27, 216, 1728], 0, evaluator=ev3
    )
    elapsed = time.monotonic() - t0
    k2_ok = -0.65 <= p2.slope <= -0.35
    k3_ok = -0.53 <= p3.slope <= -0.13
    ok = k2_ok and k3_ok and elapsed < 300.0
    criterion(
        3,
        ok,
        f"rms decay slope k=2 {p2.slope:+.4f} (need -0.5 +/- 0.15), "
        f"k=3 {p3.slope:+.4f} (need -0.33 +/- 0.2); {elapsed:.1f}s",
    )
    assert elapsed < 300.0
    assert k2_ok and k3_ok, (
        f"measured log-log rms slopes {p2.slope:+.4f} (k=2, truncations "
        f"16..1024) and {p3.slope:+.4f} (k=3, truncations 27..1728) fall "
        f"short of the asymptotic rates: at these truncation lengths the "
        f"dropped terms still carry most of the error-term energy, so the "
        f"rms shrinks far slower than its large-N rate.  The expansion "
        f"itself is validated in the unit suite (term identities, "
        f"double-double phases, absolute error shrinking toward zero)."
    )


def test_criterion_04_mean_square_constant_k3(criterion):
    ev3_big = DeltaEvaluator.for_k(3, 10**6)
    normalized = [
        moments.moment_integral(ev3_big, 2, 1, X).normalization
        for X in (1e4, 1e5, 1e6)
    ]
    series, tail = moments.mean_square_constant(3, terms=10**7)
    gaps = [abs(v - series) for v in normalized]
    approach_ok = gaps[-1] < gaps[0] and gaps[0] > gaps[1] > gaps[2]
    rel_gap = abs(normalized[-1] - series) / series
    value_ok = rel_gap <= 0.30
    criterion(
        4,
        approach_ok and value_ok,
        f"normalised mean square {normalized[0]:.3f} / {normalized[1]:.3f} "
        f"/ {normalized[2]:.3f} at X=1e4/1e5/1e6 vs series {series:.3f} "
        f"(+tail bound {tail:.0f}); gaps shrink {gaps[0]:.1f} -> "
        f"{gaps[2]:.1f}; final gap {rel_gap:.1%} (cap 30%)",
    )
    assert approach_ok
    assert value_ok, (
        f"normalised value {normalized[-1]:.3f} at X=1e6 sits {rel_gap:.1%} "
        f"below the series partial sum {series:.3f} over n <= 1e7.  Both "
        f"sides are still far from their limits: the series' integrand "
        f"mass peaks near n = 2.6e10 (tail bound {tail:.0f}), and the "
        f"normalised integral is still climbing at X=1e6.  The required "
        f"30% agreement is out of reach at this scale in any reading of "
        f"the comparison, though the gap does shrink monotonically "
        f"({gaps[0]:.1f} -> {gaps[1]:.1f} -> {gaps[2]:.1f})."
    )


def test_criterion_05_fourth_moment_stabilises(criterion, ev2_big):
    fit = moments.fit_moment_constant(ev2_big, 4, [1e4, 1e5, 1e6, 1e7])
    normalized = [v for _, v in fit.residual_series][1:]
    variation = abs(normalized[-1] - normalized[-2]) / normalized[-2]
    ok = variation < 0.25
    criterion(
        5,
        ok,
        f"normalised fourth moment {normalized[0]:.4f} / {normalized[1]:.4f} "
        f"/ {normalized[2]:.4f} at X=1e5/1e6/1e7; last-two variation "
        f"{variation:.2%} (cap 25%)",
    )
    assert ok


def test_criterion_06_short_interval_budget(criterion, ev2_big):
    t0 = time.monotonic()
    X = 1e7
    worst = 0.0
    rows = []
    for H in (1e3, 1e4, 1e5):
        value, _ = moments.short_interval_fourth_moment(ev2_big, X, H)
        budget = 100.0 * math.log(X) ** 3 * (H * X + X**1.6 * H**0.2)
        worst = max(worst, value / budget)
        rows.append(f"H=1e{int(math.log10(H))}: {value:.2e} <= {budget:.2e}")
    elapsed = time.monotonic() - t0
    ok = worst <= 1.0 and elapsed < 600.0
    criterion(
        6,
        ok,
        f"{'; '.join(rows)}; worst ratio {worst:.1e}; {elapsed:.1f}s < 600s",
    )
    assert worst <= 1.0
    assert elapsed < 600.0


def test_criterion_07_local_average_deviation(criterion, ev2_big):
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        X = float(rng.uniform(100, 10**6))
        H = float(X ** rng.uniform(0.1, 0.5))
        _, deviation = moments.interval_average(ev2_big, X, H)
        worst = max(worst, abs(deviation) / (H * math.log(X)))
    ok = worst <= 10.0
    criterion(
        7,
        ok,
        f"max |delta(X) - interval average| / (H log X) = {worst:.4f} "
        f"over 100 random (X, H), X <= 1e6 (cap 10)",
    )
    assert ok


def test_criterion_08_quadruple_window_counts(criterion):
    t0 = time.monotonic()
    agree_ok = True
    for k in (2, 3):
        for N in (8, 20, 64):
            for delta in (0.3, 1e-2, 1.0 / N, 1e-15):
                naive = counting.count_quadruples(k, N, delta, algo="naive")
                swept = counting.count_quadruples(k, N, delta)
                if naive.count != swept.count:
                    agree_ok = False

    # cube roots are tie-free on (N, 2N] at these N, so the zero-window
    # limit is exactly the ordered diagonal count
    worst_ratio = 0.0
    zero_ok = True
    for N in (64, 128, 256):
        for p in (1, 2, 3):
            r = counting.count_2l_tuples(3, 2, N, float(N) ** -p)
            worst_ratio = max(
                worst_ratio, r.count / (N**4 * float(N) ** -p + N**2)
            )
        if counting.count_2l_tuples(3, 2, N, 1e-15).count != 2 * N * N - N:
            zero_ok = False
    elapsed = time.monotonic() - t0
    ok = agree_ok and worst_ratio <= 8.0 and zero_ok and elapsed < 120.0
    criterion(
        8,
        ok,
        f"naive = sorted at 24 (k, N <= 64, delta) combos; count/envelope "
        f"<= {worst_ratio:.2f} (cap 8) for N=64,128,256; zero-window "
        f"count = 2N^2 - N exactly; {elapsed:.1f}s < 120s",
    )
    assert agree_ok and zero_ok
    assert worst_ratio <= 8.0
    assert elapsed < 120.0


def test_criterion_09_sextuple_window_counts(criterion):
    agree_ok = True
    for delta in (0.05, 0.002, 1e-15):
        naive = counting.count_2l_naive(3, 3, 20, delta)
        whole = counting.count_2l_tuples(3, 3, 20, delta)
        blocked = counting.count_2l_tuples(3, 3, 20, delta, memory_budget=50000)
        if not naive.count == whole.count == blocked.count:
            agree_ok = False
    diag_ok = (
        counting.count_2l_tuples(3, 3, 20, 1e-15).count
        == counting.ordered_diagonal_count(3, 20)
    )
    ratios = []
    for p in (1, 2, 3):
        r = counting.count_2l_tuples(3, 3, 64, float(64) ** -p)
        ratios.append(r.count / (64**6 * float(64) ** -p + 64**3))
    budget_ok = (
        counting.count_2l_tuples(3, 3, 64, 1.0 / 64, memory_budget=200000).count
        == counting.count_2l_tuples(3, 3, 64, 1.0 / 64).count
    )
    ok = agree_ok and diag_ok and budget_ok
    criterion(
        9,
        ok,
        f"naive = in-memory = chunked at N=20 (three windows); zero-window "
        f"= 44480 diagonal; N=64 ratios "
        f"{', '.join(f'{r:.2f}' for r in ratios)} (reported, no cap)",
    )
    assert agree_ok and diag_ok and budget_ok


def test_criterion_10_extrema_scan(criterion, ev2_big):
    t0 = time.monotonic()
    scan = omega.scan_extrema(ev2_big, x_max=10**6)
    peak = scan.top_power[0].ratio_power
    xs = np.logspace(math.log10(20.0), 6, 512)
    forms_rel = float(
        np.max(np.abs(omega.gk_threshold(2, xs) / omega.g2_threshold_literal(xs) - 1.0))
    )
    alpha = omega.estimate_alpha(scan.envelope, x_min_fit=100.0)
    elapsed = time.monotonic() - t0
    peak_ok = peak > 1.0
    forms_ok = forms_rel < 5e-13
    alpha_ok = 0.2 <= alpha <= 0.35
    ok = peak_ok and forms_ok and alpha_ok
    criterion(
        10,
        ok,
        f"max |delta|/x^0.25 = {peak:.3f} > 1 on x <= 1e6; threshold forms "
        f"agree to {forms_rel:.1e} rel; alpha estimate {alpha:.4f} in "
        f"[0.2, 0.35] between floor 0.25 and upper bound {131 / 416:.4f}; "
        f"{elapsed:.1f}s",
    )
    assert peak_ok and forms_ok and alpha_ok


def test_criterion_11_deterministic_reruns(criterion, tmp_path):
    configs = {
        "omega": ExperimentConfig(
            experiment="omega", x_list=(20000.0,), limit=20000,
            cache_dir=str(tmp_path / "cache"), out_dir="",
        ),
        "voronoi": ExperimentConfig(
            experiment="voronoi", x_list=(5000.0,), n_list=(16, 64, 256),
            limit=10001, sample_count=64, rng_seed=5,
            cache_dir=str(tmp_path / "cache"), out_dir="",
        ),
    }
    ok = True
    for name, cfg in configs.items():
        blobs = []
        for run in (1, 2):
            arts = run_experiment(
                cfg.with_overrides(out_dir=str(tmp_path / f"{name}{run}"))
            )
            blobs.append(arts.csv_path.read_bytes())
        if blobs[0] != blobs[1]:
            ok = False
    criterion(
        11,
        ok,
        "omega and voronoi reruns with fixed seeds produce byte-identical "
        "CSVs",
    )
    assert ok
