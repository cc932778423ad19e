"""Truncated Voronoi-type cosine expansion of the error term.

For 2 <= k <= 4,

    Delta_k(x) ~ x^{(k-1)/(2k)} / (pi sqrt(k))
                 * sum_{n <= N} d_k(n) n^{-(k+1)/(2k)}
                   cos(2 k pi (x n)^{1/k} + (k-3) pi / 4),

a finite oscillating sum whose accuracy improves as N grows.  Phases are
huge multiples of 2*pi at large x, so the cycle count k (x n)^{1/k} is
reduced mod 1 in double-double whenever the raw phase would exceed 1e8
radians; that keeps at least eight digits in the reduced argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import dd
from .delta import DeltaEvaluator
from .divisor_core import DivisorTable, sieve_dk
from .errors import DomainError, InsufficientDataError

PHASE_DD_THRESHOLD = 1e8  # radians
_TERM_BLOCK = 512


@dataclass(frozen=True)
class VoronoiSeries:
    """Frozen coefficient data of the truncated expansion.

    ``amplitudes[n]`` is exactly d_k(n) * n^{-(k+1)/(2k)} for 1 <= n <= N
    (index 0 unused); extending N never changes the entries already
    computed.
    """

    k: int
    N: int
    amplitudes: np.ndarray = field(repr=False)
    phase_offset: float
    prefactor_exponent: float

    @classmethod
    def build(cls, k: int, N: int,
              table: DivisorTable | None = None) -> "VoronoiSeries":
        if not 2 <= k <= 4:
            raise DomainError(f"expansion implemented for 2 <= k <= 4, got k={k}")
        if N < 1:
            raise DomainError("series needs N >= 1")
        if table is None or table.limit < N or table.k != k:
            table = sieve_dk(k, N)
        n = np.arange(N + 1, dtype=np.float64)
        amp = np.zeros(N + 1)
        amp[1:] = table.values[1 : N + 1] * n[1:] ** (-(k + 1) / (2 * k))
        amp.setflags(write=False)
        return cls(
            k=k,
            N=N,
            amplitudes=amp,
            phase_offset=(k - 3) * math.pi / 4.0,
            prefactor_exponent=(k - 1) / (2 * k),
        )


def _phase_cos(xs: np.ndarray, ns: np.ndarray, k: int, offset: float,
               mode: str) -> np.ndarray:
    """cos of the term phases for every (x, n) pair, broadcast to a
    (len(xs), len(ns)) matrix."""
    if mode == "double":
        cycles = k * (xs[:, None] * ns[None, :]) ** (1.0 / k)
        return np.cos(2.0 * math.pi * cycles + offset)
    # double-double: exact product, Newton root, mod-1 reduction
    ph, pl = dd.two_prod(xs[:, None], ns[None, :])
    rh, rl = dd.root(ph, pl, k)
    ch, cl = dd.mul_d(rh, rl, float(k))
    fh, fl = dd.mod1(ch, cl)
    return np.cos(2.0 * math.pi * (fh + fl) + offset)


def _pick_mode(mode: str, k: int, x_max: float, N: int) -> str:
    if mode in ("double", "dd"):
        return mode
    if mode != "auto":
        raise ValueError(f"unknown phase mode {mode!r}")
    peak = 2.0 * math.pi * k * (x_max * N) ** (1.0 / k)
    return "dd" if peak > PHASE_DD_THRESHOLD else "double"


def truncated_voronoi_many(series: VoronoiSeries, xs, N: int | None = None,
                           phase_mode: str = "auto") -> np.ndarray:
    """Vectorised evaluation of the truncated expansion at each x."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    if xs.size == 0:
        return np.zeros(0)
    if float(xs.min()) < 1.0:
        raise DomainError("expansion needs x >= 1")
    N = series.N if N is None else int(N)
    if not 1 <= N <= series.N:
        raise DomainError(f"N={N} outside series range [1, {series.N}]")
    if N > float(xs.min()):
        warnings.warn(
            f"truncation length N={N} is not small against x={xs.min():g}; "
            "the tail estimate behind the expansion degrades",
            stacklevel=2,
        )
    mode = _pick_mode(phase_mode, series.k, float(xs.max()), N)
    total = np.zeros(xs.shape)
    for lo in range(1, N + 1, _TERM_BLOCK):
        hi = min(lo + _TERM_BLOCK - 1, N)
        ns = np.arange(lo, hi + 1, dtype=np.float64)
        cosm = _phase_cos(xs, ns, series.k, series.phase_offset, mode)
        total += cosm @ series.amplitudes[lo : hi + 1]
    return xs**series.prefactor_exponent / (math.pi * math.sqrt(series.k)) * total


def truncated_voronoi(series: VoronoiSeries, x, N: int | None = None,
                      phase_mode: str = "auto") -> float:
    return float(truncated_voronoi_many(series, [x], N=N, phase_mode=phase_mode)[0])


@dataclass(frozen=True)
class ErrorProfile:
    """Truncation-error statistics against exact Delta_k over [X, 2X]."""

    k: int
    X: float
    sample_count: int
    rng_seed: int
    rows: tuple  # (N, rms_error, max_error) ascending in N
    slope: float | None  # d log(rms) / d log(N), None when a single N


def truncation_error_profile(k: int, X, sample_count: int, N_list,
                             rng_seed: int,
                             evaluator: DeltaEvaluator | None = None) -> ErrorProfile:
    """RMS and max truncation error at half-integer samples from [X, 2X].

    Sampling uses numpy's seeded PCG64 generator, so a fixed seed gives a
    fixed sample set.  Half-integers keep every sample away from the
    jumps of D_k.  The slope of log(rms) against log(N) is fitted by
    least squares when at least two N values are requested.
    """
    if sample_count < 8:
        raise InsufficientDataError("sample_count must be at least 8")
    X = float(X)
    if X < 2:
        raise DomainError("profile needs X >= 2")
    Ns = sorted({int(N) for N in N_list})
    if not Ns or Ns[0] < 1:
        raise DomainError("N_list entries must be positive")
    if Ns[-1] > X:
        warnings.warn(
            f"largest N={Ns[-1]} exceeds X={X:g}; expansion accuracy degrades",
            stacklevel=2,
        )
    need = int(2 * X) + 1
    if evaluator is None:
        evaluator = DeltaEvaluator.for_k(k, need)
    if evaluator.k != k or evaluator.limit < need:
        raise ValueError(f"evaluator must cover k={k} up to {need}")

    rng = np.random.default_rng(rng_seed)
    xs = X + rng.integers(0, int(X), size=sample_count) + 0.5
    exact = evaluator.delta_many(xs)
    series = VoronoiSeries.build(k, Ns[-1], table=evaluator.table)

    rows = []
    partial = np.zeros(sample_count)
    prev = 0
    mode = _pick_mode("auto", k, float(xs.max()), Ns[-1])
    for N in Ns:
        for lo in range(prev + 1, N + 1, _TERM_BLOCK):
            hi = min(lo + _TERM_BLOCK - 1, N)
            ns = np.arange(lo, hi + 1, dtype=np.float64)
            cosm = _phase_cos(xs, ns, k, series.phase_offset, mode)
            partial += cosm @ series.amplitudes[lo : hi + 1]
        prev = N
        approx = (
            xs**series.prefactor_exponent / (math.pi * math.sqrt(k)) * partial
        )
        err = exact - approx
        rows.append((N, float(np.sqrt(np.mean(err**2))), float(np.max(np.abs(err)))))

    slope = None
    if len(Ns) >= 2:
        slope = float(
            np.polyfit(np.log([r[0] for r in rows]),
                       np.log([r[1] for r in rows]), 1)[0]
        )
    return ErrorProfile(
        k=k,
        X=X,
        sample_count=sample_count,
        rng_seed=int(rng_seed),
        rows=tuple(rows),
        slope=slope,
    )
