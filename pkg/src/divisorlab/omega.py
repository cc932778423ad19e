"""Extreme values of the error term and the thresholds they are
measured against.

The lower-bound threshold for k-th divisor error terms is

    G_k(x) = (x log x)^{(k-1)/(2k)} (log log x)^a (log log log x)^{-b},
    a = ((k+1)/(2k)) (k^{2k/(k+1)} - 1),     b = (3k - 1)/(4k),

defined for x > e^e where the triple logarithm is positive.  The scan
walks the table, sampling each unit interval at its left end, its
midpoint and one ulp before the next jump (where the smooth piece is
most negative), and keeps top records, the running-max envelope of
|Delta_k| and the longest constant-sign stretches.  The envelope feeds
a crude regression estimate of the growth exponent alpha.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .delta import DeltaEvaluator
from .divisor_core import DivisorTable
from .errors import DomainError, InsufficientDataError

E_CUBE = math.exp(math.e)  # e^e, lower edge of the triple-log domain
_SCAN_CHUNK = 1 << 16


def gk_exponents(k: int) -> tuple[float, float]:
    """The pair (a, b) of log-log and triple-log exponents."""
    if k < 2:
        raise DomainError(f"need k >= 2, got k={k}")
    a = (k + 1) / (2.0 * k) * (float(k) ** (2.0 * k / (k + 1)) - 1.0)
    b = (3.0 * k - 1.0) / (4.0 * k)
    return a, b


def gk_threshold(k: int, x):
    """G_k(x); accepts a scalar or an array, all entries above e^e."""
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs <= E_CUBE):
        raise DomainError(f"threshold needs x > e^e = {E_CUBE:.6f}")
    a, b = gk_exponents(k)
    lx = np.log(xs)
    llx = np.log(lx)
    lllx = np.log(llx)
    out = (xs * lx) ** ((k - 1) / (2.0 * k)) * llx**a * lllx ** (-b)
    return float(out) if np.isscalar(x) else out


def g2_threshold_literal(x):
    """The k = 2 threshold with its exponents written out:
    (x log x)^{1/4} (log log x)^{3/4 (2^{4/3} - 1)} (log log log x)^{-5/8}."""
    xs = np.asarray(x, dtype=np.float64)
    if np.any(xs <= E_CUBE):
        raise DomainError(f"threshold needs x > e^e = {E_CUBE:.6f}")
    lx = np.log(xs)
    llx = np.log(lx)
    lllx = np.log(llx)
    out = (xs * lx) ** 0.25 * llx ** (0.75 * (2.0 ** (4.0 / 3.0) - 1.0)) \
        * lllx ** (-0.625)
    return float(out) if np.isscalar(x) else out


@dataclass(frozen=True)
class ExtremaRecord:
    """One sampled point with its normalised sizes."""

    x: float
    delta_value: float
    ratio_power: float  # |Delta| / x^{(k-1)/(2k)}
    ratio_G: float | None  # |Delta| / G_k(x); None at or below e^e
    sign: int


@dataclass(frozen=True)
class ScanResult:
    """Everything the extrema scan accumulates in one pass."""

    k: int
    x_max: int
    top_power: tuple
    top_G: tuple
    envelope: tuple  # records at each new running maximum of |Delta|
    longest_positive_run: tuple | None  # (start_x, end_x)
    longest_negative_run: tuple | None
    zero_count: int

    @property
    def records(self) -> tuple:
        """Top records by either normalisation, strongest first."""
        seen = {}
        for rec in self.top_power + self.top_G:
            seen.setdefault(rec.x, rec)
        return tuple(
            sorted(seen.values(), key=lambda r: -r.ratio_power)
        )

    def __iter__(self):
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def _make_records(k: int, xs, deltas) -> list[ExtremaRecord]:
    out = []
    power = (k - 1) / (2.0 * k)
    for x, dv in zip(xs, deltas):
        x = float(x)
        dv = float(dv)
        ratio_G = abs(dv) / gk_threshold(k, x) if x > E_CUBE else None
        out.append(
            ExtremaRecord(
                x=x,
                delta_value=dv,
                ratio_power=abs(dv) / x**power,
                ratio_G=ratio_G,
                sign=int(np.sign(dv)),
            )
        )
    return out


def scan_extrema(evaluator: DeltaEvaluator, x_max: int | None = None,
                 record_top: int = 10) -> ScanResult:
    """One streaming pass over all sample points up to x_max.

    Samples stay at or below x_max, so a scan below e^e carries no
    threshold ratios at all.  Exact zeros of Delta are counted and kept
    out of sign runs and records rather than given an arbitrary sign.
    """
    k = evaluator.k
    x_max = evaluator.limit if x_max is None else int(x_max)
    if not 1 <= x_max <= evaluator.limit:
        raise DomainError(f"x_max must lie in [1, {evaluator.limit}]")
    if record_top < 1:
        raise DomainError("record_top must be positive")
    prefix = evaluator.table.prefix
    poly = evaluator.poly
    power = (k - 1) / (2.0 * k)

    cand_power: list = []
    cand_G: list = []
    env_x: list = []
    env_d: list = []
    run_sign = 0
    run_start = 1.0
    run_last = 1.0
    best_pos: tuple | None = None
    best_neg: tuple | None = None
    prev_max = 0.0
    zero_count = 0

    def close_run(end_x: float) -> None:
        nonlocal best_pos, best_neg
        length = end_x - run_start
        if run_sign > 0 and (best_pos is None or length > best_pos[1] - best_pos[0]):
            best_pos = (run_start, end_x)
        if run_sign < 0 and (best_neg is None or length > best_neg[1] - best_neg[0]):
            best_neg = (run_start, end_x)

    for lo in range(1, x_max + 1, _SCAN_CHUNK):
        hi = min(lo + _SCAN_CHUNK - 1, x_max)
        ns = np.arange(lo, hi + 1, dtype=np.int64)
        xs = np.empty((ns.size, 3))
        xs[:, 0] = ns
        xs[:, 1] = ns + 0.5
        xs[:, 2] = np.nextafter(ns + 1.0, 0.0)
        if hi == x_max:
            # keep samples at or below x_max
            xs[-1, 1:] = float(x_max)
        D = prefix[ns].astype(np.float64)[:, None]
        xs = xs.ravel()
        deltas = (D - xs.reshape(-1, 3) * poly(np.log(xs)).reshape(-1, 3)).ravel()
        if hi == x_max:
            xs = xs[:-2]
            deltas = deltas[:-2]
        absd = np.abs(deltas)

        # top candidates by both normalisations
        rp = absd / xs**power
        take = min(record_top, rp.size)
        idx = np.argpartition(rp, -take)[-take:]
        cand_power.extend(zip(xs[idx], deltas[idx], rp[idx]))
        over = xs > E_CUBE
        if np.any(over):
            rg = absd[over] / gk_threshold(k, xs[over])
            take = min(record_top, rg.size)
            idx = np.argpartition(rg, -take)[-take:]
            cand_G.extend(zip(xs[over][idx], deltas[over][idx], rg[idx]))

        # running-max envelope of |Delta|
        acc = np.maximum.accumulate(absd)
        prev = np.concatenate(([prev_max], acc[:-1]))
        mask = absd > prev
        env_x.extend(xs[mask])
        env_d.extend(deltas[mask])
        prev_max = max(prev_max, float(acc[-1]))

        # constant-sign runs, exact zeros breaking but counted
        signs = np.sign(deltas).astype(np.int8)
        zero_count += int(np.count_nonzero(signs == 0))
        for s, x in zip(signs, xs):
            s = int(s)
            if s == run_sign:
                run_last = float(x)
                continue
            if run_sign != 0:
                close_run(run_last)
            run_sign = s
            run_start = float(x)
            run_last = float(x)
    if run_sign != 0:
        close_run(run_last)

    top_power = sorted(cand_power, key=lambda t: -t[2])[:record_top]
    top_G = sorted(cand_G, key=lambda t: -t[2])[:record_top]
    return ScanResult(
        k=k,
        x_max=x_max,
        top_power=tuple(_make_records(k, [t[0] for t in top_power],
                                      [t[1] for t in top_power])),
        top_G=tuple(_make_records(k, [t[0] for t in top_G],
                                  [t[1] for t in top_G])),
        envelope=tuple(_make_records(k, env_x, env_d)),
        longest_positive_run=best_pos,
        longest_negative_run=best_neg,
        zero_count=zero_count,
    )


def estimate_alpha(records, x_min_fit: float) -> float:
    """Envelope-slope estimate of the growth exponent.

    Regresses log(running max |Delta|) on log x over the points where
    the running maximum increases; at least 10 records above x_min_fit
    are required.  Estimates outside the a-priori sane range [0, 1/2]
    are returned but warned about.
    """
    pts = sorted(
        ((r.x, abs(r.delta_value)) for r in records if r.x > x_min_fit),
    )
    if len(pts) < 10:
        raise InsufficientDataError(
            f"need at least 10 records above x={x_min_fit:g}, got {len(pts)}"
        )
    xs = []
    ys = []
    running = 0.0
    for x, v in pts:
        if v > running:
            running = v
            xs.append(x)
            ys.append(v)
    if len(xs) < 2:
        return 0.0  # the envelope never rose: flat data
    alpha = float(np.polyfit(np.log(xs), np.log(ys), 1)[0])
    if not 0.0 <= alpha <= 0.5:
        warnings.warn(
            f"alpha estimate {alpha:.3f} outside [0, 0.5]; data is "
            "unlikely to be a genuine error-term envelope",
            stacklevel=2,
        )
    return alpha


def shiu_check(table: DivisorTable, x, h) -> tuple[int, float]:
    """Short-interval divisor sum against its h log x envelope.

    Returns ``(sum, ratio)`` with sum = D(x+h) - D(x) over the ordinary
    divisor function and ratio = sum / (h log x).
    """
    if table.k != 2:
        raise DomainError("the short-interval divisor bound concerns d = d_2")
    x = float(x)
    h = float(h)
    if x < 2:
        raise DomainError(f"need x >= 2, got x={x}")
    if not x**0.1 <= h <= x:
        raise DomainError(
            f"h must lie in [x^0.1, x] = [{x**0.1:.3f}, {x:g}], got h={h}"
        )
    if x + h > table.limit:
        raise DomainError(f"x + h = {x + h:g} beyond table limit {table.limit}")
    total = int(table.summatory(math.floor(x + h)) - table.summatory(math.floor(x)))
    return total, total / (h * math.log(x))


def shiu_sweep(table: DivisorTable, sample_count: int = 1000,
               rng_seed: int = 0, x_max: float | None = None) -> tuple:
    """Ratio sweep over random (x, h) pairs; returns (x, h, sum, ratio)
    rows.  x is drawn log-uniform, h log-uniform within [x^0.1, x]."""
    if sample_count < 1:
        raise DomainError("sample_count must be positive")
    if x_max is None:
        x_max = table.limit / 2
    x_max = float(min(x_max, table.limit / 2))
    if x_max < 100:
        raise DomainError("table too small for a meaningful sweep")
    rng = np.random.default_rng(rng_seed)
    rows = []
    for _ in range(sample_count):
        x = float(np.exp(rng.uniform(math.log(100.0), math.log(x_max))))
        h = float(np.exp(rng.uniform(0.1 * math.log(x), math.log(x))))
        h = min(h, table.limit - x)
        total, ratio = shiu_check(table, x, h)
        rows.append((x, h, total, ratio))
    return tuple(rows)
