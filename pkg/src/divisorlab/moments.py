"""Power moments of the error term over long and short intervals.

Between consecutive integers the summatory function is constant, so
Delta_k is smooth there and int_a^b Delta_k(t)^m dt splits into unit
pieces on which fixed-order Gauss-Legendre quadrature is exact to
rounding.  On top of the raw integrals this module fits the moment
constants (normalised by x^{1 + m(k-1)/(2k)}), evaluates the limiting
mean-square series

    C_k = 1 / ((4k - 2) pi^2) * sum_{n >= 1} d_k(n)^2 n^{-(k+1)/k},

and checks the short-interval fourth-moment budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .delta import DeltaEvaluator
from .divisor_core import safe_floor
from .errors import DomainError, InsufficientDataError

#: known alpha bounds for the k = 2 error-term exponent
ALPHA_FLOOR = 0.25
ALPHA_HUXLEY = 131.0 / 416.0

_CHUNK_PIECES = 65536


@dataclass(frozen=True)
class MomentResult:
    """One moment integral with its power-law normalisation."""

    k: int
    m: int
    a: float
    b: float
    value: float
    quadrature_order: int
    normalization: float  # value / b^{1 + m(k-1)/(2k)}


@dataclass(frozen=True)
class FitResult:
    """Empirical moment constant from a sequence of normalised values."""

    fitted_constant: float
    exponent_fixed: float
    residual_series: tuple  # (X, normalized value) pairs, X increasing


def _gauss_nodes(order: int) -> tuple[np.ndarray, np.ndarray]:
    if not 4 <= order <= 16:
        raise DomainError(f"quadrature order must lie in [4, 16], got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return 0.5 * (nodes + 1.0), 0.5 * weights  # mapped to [0, 1]


def _integrate(evaluator: DeltaEvaluator, m: int, a: float, b: float,
               order: int) -> float:
    """int_a^b Delta_k(t)^m dt, pieces summed with Kahan compensation."""
    offs, wts = _gauss_nodes(order)
    poly = evaluator.poly
    prefix = evaluator.table.prefix

    def chunk_sum(lefts: np.ndarray, rights: np.ndarray,
                  Dvals: np.ndarray) -> float:
        widths = rights - lefts
        t = lefts[:, None] + widths[:, None] * offs[None, :]
        diff = Dvals[:, None] - t * poly(np.log(t))
        piece = (diff**m * wts[None, :]).sum(axis=1) * widths
        return float(np.sum(piece))

    n_a = safe_floor(a)
    n_b = safe_floor(b)
    if n_a == n_b:
        # both endpoints inside a single unit interval
        return chunk_sum(np.array([a]), np.array([b]),
                         np.array([float(prefix[n_a])]))
    total = 0.0
    comp = 0.0

    def accumulate(v: float) -> None:
        nonlocal total, comp
        y = v - comp
        t = total + y
        comp = (t - total) - y
        total = t

    start = a
    if a < n_a + 1:
        accumulate(chunk_sum(np.array([a]), np.array([float(n_a + 1)]),
                             np.array([float(prefix[n_a])])))
        start = float(n_a + 1)
    lo = safe_floor(start)
    while lo < n_b:
        hi = min(lo + _CHUNK_PIECES, n_b)
        ns = np.arange(lo, hi, dtype=np.int64)
        accumulate(chunk_sum(ns.astype(np.float64),
                             (ns + 1).astype(np.float64),
                             prefix[ns].astype(np.float64)))
        lo = hi
    if b > n_b:
        accumulate(chunk_sum(np.array([float(n_b)]), np.array([b]),
                             np.array([float(prefix[n_b])])))
    return total


def _check_bounds(evaluator: DeltaEvaluator, a: float, b: float) -> None:
    if not 1.0 <= a <= b:
        raise DomainError(f"need 1 <= a <= b, got a={a}, b={b}")
    if b > evaluator.limit:
        raise DomainError(
            f"upper limit {b} exceeds evaluator range {evaluator.limit}"
        )


def moment_exponent(k: int, m: int) -> float:
    """Power of x that normalises int_1^x Delta_k^m to a constant."""
    return 1.0 + m * (k - 1) / (2.0 * k)


def moment_integral(evaluator: DeltaEvaluator, m: int, a, b,
                    order: int = 8) -> MomentResult:
    """int_a^b Delta_k(t)^m dt with its normalisation by b's power law.

    An empty interval (a equal to b) integrates to zero; reversed bounds
    are rejected.
    """
    if not 1 <= m <= 9:
        raise DomainError(f"moment order must lie in {{1,...,9}}, got m={m}")
    a = float(a)
    b = float(b)
    _check_bounds(evaluator, a, b)
    value = 0.0 if a == b else _integrate(evaluator, m, a, b, order)
    k = evaluator.k
    return MomentResult(
        k=k,
        m=m,
        a=a,
        b=b,
        value=value,
        quadrature_order=order,
        normalization=value / b ** moment_exponent(k, m),
    )


def fit_moment_constant(evaluator: DeltaEvaluator, m: int, X_list,
                        order: int = 8) -> FitResult:
    """Normalised moment sequence over increasing X; the last entry is
    the empirical constant.  Values are accumulated incrementally so the
    divisor table is swept once."""
    Xs = [float(X) for X in X_list]
    if len(Xs) < 4:
        raise InsufficientDataError(
            f"need at least 4 evaluation points, got {len(Xs)}"
        )
    if any(x2 <= x1 for x1, x2 in zip(Xs, Xs[1:])):
        raise DomainError("X_list must be strictly increasing")
    _check_bounds(evaluator, 1.0, Xs[-1])
    expo = moment_exponent(evaluator.k, m)
    series = []
    running = 0.0
    prev = 1.0
    for X in Xs:
        running += _integrate(evaluator, m, prev, X, order)
        prev = X
        series.append((X, running / X**expo))
    return FitResult(
        fitted_constant=series[-1][1],
        exponent_fixed=expo,
        residual_series=tuple(series),
    )


def interval_average(evaluator: DeltaEvaluator, X, H,
                     order: int = 8) -> tuple[float, float]:
    """(1/H) int_X^{X+H} Delta_k, and the deviation Delta_k(X) - average.

    H may be fractional, even below one unit interval; only H > 0 and
    X + H inside the table are required.
    """
    X = float(X)
    H = float(H)
    if H <= 0:
        raise DomainError(f"need H > 0, got H={H}")
    _check_bounds(evaluator, X, X + H)
    average = _integrate(evaluator, 1, X, X + H, order) / H
    return average, evaluator.delta(X) - average


def short_interval_fourth_moment(evaluator: DeltaEvaluator, X, H,
                                 order: int = 8) -> tuple[float, tuple[float, float]]:
    """int_{X-H}^{X+H} Delta_k^4 plus the two comparison envelopes
    (H x^{(2k-2)/k}, H^{(2k-3)/(2k+1)} x^{(8k-8)/(2k+1)})."""
    X = float(X)
    H = float(H)
    if not 1.0 <= H <= X / 2.0:
        raise DomainError(f"need 1 <= H <= X/2, got X={X}, H={H}")
    _check_bounds(evaluator, X - H, X + H)
    k = evaluator.k
    value = _integrate(evaluator, 4, X - H, X + H, order)
    first = H * X ** ((2.0 * k - 2.0) / k)
    second = H ** ((2.0 * k - 3.0) / (2.0 * k + 1.0)) * X ** (
        (8.0 * k - 8.0) / (2.0 * k + 1.0)
    )
    return value, (first, second)


@dataclass(frozen=True)
class HuxleyReport:
    """Short-interval fourth moment against H x + x^{1+2 alpha} budgets."""

    X: float
    H: float
    measured: float
    entries: tuple  # (alpha, exponent 1 + 2 alpha, budget, measured/(log^3 x * budget))


def huxley_bound_check(evaluator: DeltaEvaluator, X, H,
                       alpha_est: float, order: int = 8) -> HuxleyReport:
    """Compare the measured fourth moment over [X-H, X+H] with the
    envelope log^3(X) (H X + X^{1+2a}) at a = alpha_est, 131/416 and the
    floor 1/4."""
    X = float(X)
    H = float(H)
    if not math.sqrt(X) <= H <= X / 2.0:
        raise DomainError(f"need sqrt(X) <= H <= X/2, got X={X}, H={H}")
    measured, _ = short_interval_fourth_moment(evaluator, X, H, order=order)
    entries = []
    for alpha in (alpha_est, ALPHA_HUXLEY, ALPHA_FLOOR):
        expo = 1.0 + 2.0 * alpha
        budget = H * X + X**expo
        entries.append(
            (alpha, expo, budget, measured / (math.log(X) ** 3 * budget))
        )
    return HuxleyReport(X=X, H=H, measured=measured, entries=tuple(entries))


def mean_square_constant(k: int, terms: int = 200000,
                         table=None) -> tuple[float, float]:
    """Partial sum and tail estimate of the mean-square constant C_k.

    Returns ``(value, tail_bound)``: the partial sum over n <= terms,
    and an estimate of the remainder obtained by calibrating
    d_k(n)^2 ~ A log^{k^2-1} n on the last decade of computed terms and
    integrating that model over (terms, infinity).
    """
    from .divisor_core import sieve_dk

    if terms < 100:
        raise DomainError("need at least 100 terms")
    if table is None or table.k != k or table.limit < terms:
        table = sieve_dk(k, terms)
    n = np.arange(1, terms + 1, dtype=np.float64)
    d = table.values[1 : terms + 1].astype(np.float64)
    s = (k + 1.0) / k
    series = float(np.sum(d * d * n**(-s)))
    value = series / ((4.0 * k - 2.0) * math.pi**2)

    p = k * k - 1
    lo = terms // 10
    tail_n = n[lo:]
    tail_d2 = d[lo:] ** 2
    A = float(np.sum(tail_d2) / np.sum(np.log(tail_n) ** p))
    M = float(terms)
    # J_q = int_M^inf t^{-s} log^q t dt, by the integration-by-parts recurrence
    J = M ** (1.0 - s) / (s - 1.0)
    for q in range(1, p + 1):
        J = (M ** (1.0 - s) * math.log(M) ** q + q * J) / (s - 1.0)
    tail = A * J / ((4.0 * k - 2.0) * math.pi**2)
    return value, tail


def mean_square_constant_exact_k2() -> float:
    """zeta(3/2)^4 / zeta(3) / (6 pi^2), the k = 2 constant in closed form."""
    import mpmath as mp

    with mp.workdps(30):
        c = mp.zeta(mp.mpf(3) / 2) ** 4 / mp.zeta(3) / (6 * mp.pi**2)
        return float(c)
