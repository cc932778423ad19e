"""Main-term polynomial of the divisor summatory function.

D_k(x) = x * P_{k-1}(log x) + Delta_k(x), where P_{k-1} has degree k - 1
and is the residue of zeta(s)^k x^s / s at s = 1.  For k = 2 the closed
form is log x + 2*gamma - 1.  For k = 3 and 4 the coefficients are
extracted by a high-precision contour integral on a small circle around
s = 1 and cross-validated against a least-squares fit to exact integrated
summatory data; construction fails if the two routes disagree beyond six
significant digits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .divisor_core import DivisorTable, sieve_dk
from .errors import UnsupportedMethodError, ValidationError

EULER_GAMMA = 0.5772156649015328606

CONTOUR_RADIUS = 0.25
CONTOUR_POINTS = 128
CONTOUR_DPS = 50
FIT_RTOL = 5e-7  # six significant digits

_DEFAULT_FIT_LIMIT = 10**6


@dataclass(frozen=True)
class MainTermPolynomial:
    """P_{k-1}: coeffs[j] multiplies log(x)^j; degree is exactly k - 1."""

    k: int
    coeffs: np.ndarray
    provenance: str  # "closed-form" or "residue-oracle"

    def poly(self, z):
        z = np.asarray(z, dtype=np.float64)
        acc = np.zeros_like(z)
        for c in self.coeffs[::-1]:
            acc = acc * z + c
        return acc

    def __call__(self, z):
        return self.poly(z)

    def main_term(self, x):
        x = np.asarray(x, dtype=np.float64)
        return x * self.poly(np.log(x))


def residue_main_term_coeffs(k: int) -> np.ndarray:
    """Contour oracle for the coefficients of P_{k-1}.

    Writes the residue at s = 1 + w as x * sum_m (L^m / m!) * A_m with
    L = log x and A_m the w^{-m-1} Laurent coefficient of
    h(w) = zeta(1+w)^k / (1+w).  Each A_m comes from the trapezoidal rule
    on the circle |w| = 1/4 at 50 digits; for a periodic analytic
    integrand the trapezoid converges geometrically, and the nearest
    singularity of h away from 0 sits at w = -1, so 128 points leave an
    aliasing error around 2^-128.
    """
    M = CONTOUR_POINTS
    with mpmath.workdps(CONTOUR_DPS):
        r = mpmath.mpf(1) / 4
        ws = [r * mpmath.expjpi(mpmath.mpf(2 * j) / M) for j in range(M)]
        hs = [mpmath.zeta(1 + w) ** k / (1 + w) for w in ws]
        coeffs = []
        for m_idx in range(k + 1):
            a = sum(h * w ** (m_idx + 1) for h, w in zip(hs, ws)) / M
            if abs(mpmath.im(a)) > mpmath.mpf(10) ** (-30):
                raise ValidationError(
                    f"contour oracle: non-real coefficient at m={m_idx}"
                )
            coeffs.append(mpmath.re(a) / mpmath.factorial(m_idx))
        # one past the degree must vanish, and the leading coefficient is
        # pinned at 1/(k-1)! by the principal part of zeta^k
        if abs(coeffs[k]) > mpmath.mpf(10) ** (-25):
            raise ValidationError("contour oracle: degree overflow")
        lead = coeffs[k - 1] * mpmath.factorial(k - 1) - 1
        if abs(lead) > mpmath.mpf(10) ** (-25):
            raise ValidationError("contour oracle: wrong leading coefficient")
        return np.array([float(c) for c in coeffs[:k]])


def _series_main_term_coeffs(k: int) -> np.ndarray:
    """Independent route: compose the Laurent series of zeta around s = 1
    from Stieltjes constants and read the same coefficients off the
    product.  Used to cross-check the contour oracle in tests."""

    def _poly_mul_trunc(p, q, n):
        out = [mpmath.mpf(0)] * n
        for i, pi in enumerate(p):
            if i >= n:
                break
            for j, qj in enumerate(q):
                if i + j >= n:
                    break
                out[i + j] += pi * qj
        return out

    with mpmath.workdps(CONTOUR_DPS):
        # u(w) = w * zeta(1+w) = 1 + gamma*w - gamma_1*w^2 + ...
        u = [mpmath.mpf(1)] + [
            (-1) ** (i - 1) * mpmath.stieltjes(i - 1) / mpmath.factorial(i - 1)
            for i in range(1, k + 1)
        ]
        p = [mpmath.mpf(1)]
        for _ in range(k):
            p = _poly_mul_trunc(p, u, k + 1)
        inv = [mpmath.mpf((-1) ** i) for i in range(k + 1)]
        q = _poly_mul_trunc(p, inv, k + 1)
        return np.array(
            [float(q[k - 1 - m] / mpmath.factorial(m)) for m in range(k)]
        )


_LD = np.longdouble


def _antiderivative_terms(terms: dict) -> dict:
    """One antiderivative of sum c * t^p log^i t, anchored at t = 1.

    Terms are stored as {(p, i): c}.  Repeated integration by parts gives
    int t^p log^i t dt = t^{p+1} sum_s (-1)^s i!/(i-s)! / (p+1)^{s+1}
    * log^{i-s} t; the value at t = 1 is folded into the (0, 0) slot so
    every column vanishes there, matching the data's lower limit.
    """
    out: dict = {}
    for (p, i), c in terms.items():
        for s in range(i + 1):
            coef = c * (-1) ** s * math.factorial(i) / math.factorial(i - s)
            coef = coef / _LD(p + 1) ** (s + 1)
            key = (p + 1, i - s)
            out[key] = out.get(key, _LD(0)) + coef
        at_one = c * (-1) ** i * math.factorial(i) / _LD(p + 1) ** (i + 1)
        out[(0, 0)] = out.get((0, 0), _LD(0)) - at_one
    return out


def _log_power_column(terms: dict, xs: np.ndarray) -> np.ndarray:
    lx = np.log(xs)
    out = np.zeros_like(xs)
    for (p, i), c in terms.items():
        out += c * xs**p * lx**i
    return out


def _weighted_prefix_sums(table: DivisorTable, grid: np.ndarray,
                          jmax: int) -> np.ndarray:
    """S_j(X) = sum_{n <= X} d_k(n) n^j for j = 0..jmax at each grid X."""
    n_ld = np.arange(table.limit + 1, dtype=_LD)
    power = table.values.astype(_LD)
    out = np.empty((jmax + 1, grid.size), dtype=_LD)
    for j in range(jmax + 1):
        acc = _LD(0)
        prev = 0
        for idx, g in enumerate(grid):
            acc += power[prev + 1 : g + 1].sum(dtype=_LD)
            out[j, idx] = acc
            prev = int(g)
        if j < jmax:
            power = power * n_ld
    return out


def _solve_least_squares(A: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Householder QR least squares, run in whatever dtype A carries.

    LAPACK only works in double, and at depth >= 4 the double solve hits
    a rounding floor around 1e-6 relative; doing the factorization in
    extended precision removes it.
    """
    A = A.copy()
    y = y.copy()
    n = A.shape[1]
    for j in range(n):
        v = A[j:, j].copy()
        alpha = np.sqrt(np.sum(v * v))
        if v[0] >= 0:
            alpha = -alpha
        v[0] -= alpha
        norm2 = np.sum(v * v)
        if norm2 == 0:
            continue
        w = (A[j:, j:].T @ v) * (2 / norm2)
        A[j:, j:] -= np.outer(v, w)
        y[j:] -= v * (2 * np.dot(v, y[j:]) / norm2)
    sol = np.zeros(n, dtype=A.dtype)
    for i in range(n - 1, -1, -1):
        sol[i] = (y[i] - np.dot(A[i, i + 1 :], sol[i + 1 :])) / A[i, i]
    return sol


def integrated_lsq_coeffs(table: DivisorTable, depth: int | None = None,
                          x_lo: int = 300, x_hi: int | None = None,
                          points: int = 192) -> np.ndarray:
    """Least-squares recovery of the main-term coefficients from iterated
    integrals of the summatory function.

    The observable at depth r is Y_r(X) = sum_{n <= X} d_k(n) (X-n)^r / r!,
    the r-fold integral of D_k from 1.  Each integration shrinks the
    oscillating error term by roughly X^{1-1/k} relative to the main term,
    so by r = k + 2 (the default) the residual sits far below the last
    digit of the coefficients.  Y_r is evaluated through the binomial
    expansion (X-n)^r = sum_j C(r,j) X^{r-j} (-n)^j, which reduces to
    prefix sums S_j = sum d_k(n) n^j; the mild cancellation this brings
    (a couple of digits) is absorbed by carrying everything in extended
    precision.

    The model is the r-fold antiderivative of t log^j t for j < k plus a
    degree-r polynomial in X absorbing the integration constants.  Rows
    are weighted by X^{(k+1)/(2k) + r/k} / |Y_r|, the inverse of the
    expected relative size of the integrated oscillation, which keeps
    every decade of the grid informative instead of letting the largest
    X dominate.
    """
    k = table.k
    limit = table.limit
    if depth is None:
        depth = k + 2
    if depth < 1:
        raise ValueError("depth must be at least 1")
    x_hi = min(int(x_hi) if x_hi else limit, limit)
    if not 1 <= x_lo < x_hi:
        raise ValueError("need 1 <= x_lo < x_hi <= table limit")
    grid = np.unique(
        np.round(np.logspace(math.log10(x_lo), math.log10(x_hi), points))
    ).astype(np.int64)
    if grid.size < k + depth + 2:
        raise ValueError("grid too coarse for the number of fit columns")

    S = _weighted_prefix_sums(table, grid, depth)
    Xf = grid.astype(_LD)
    Y = np.zeros(grid.size, dtype=_LD)
    for j in range(depth + 1):
        Y += (-1) ** j * math.comb(depth, j) * Xf ** (depth - j) * S[j]
    Y /= math.factorial(depth)

    cols = []
    for j in range(k):
        terms = {(1, j): _LD(1)}
        for _ in range(depth):
            terms = _antiderivative_terms(terms)
        cols.append(_log_power_column(terms, Xf))
    for q in range(depth + 1):
        cols.append(Xf**q)
    A = np.column_stack(cols)

    weight = Xf ** (_LD(k + 1) / (2 * k) + _LD(depth) / k) / np.abs(Y)
    A = A * weight[:, None]
    scale = np.abs(A).max(axis=0)
    sol = _solve_least_squares(A / scale, Y * weight)
    return (sol[:k] / scale[:k]).astype(np.float64)


_ORACLE_CACHE: dict[int, np.ndarray] = {}
_VALIDATED: dict[int, MainTermPolynomial] = {}
_FIT_TABLE_CACHE: dict[int, DivisorTable] = {}


def main_term_coeffs(k: int, table: DivisorTable | None = None,
                     validate: bool = True) -> MainTermPolynomial:
    """Main-term polynomial for 2 <= k <= 4.

    k = 2 is the closed form [2*gamma - 1, 1].  For k = 3, 4 the contour
    oracle supplies the coefficients and, unless ``validate`` is off, a
    least-squares fit against integrated summatory data must agree to
    FIT_RTOL per coefficient.  A caller-supplied ``table`` is used for
    the fit when it reaches the internal fit limit; smaller tables would
    degrade the fit, so the internal table is built instead.
    """
    if k == 2:
        return MainTermPolynomial(
            2, np.array([2.0 * EULER_GAMMA - 1.0, 1.0]), "closed-form"
        )
    if k not in (3, 4):
        raise UnsupportedMethodError(
            f"main-term coefficients implemented for 2 <= k <= 4, got k={k}"
        )
    if table is not None and table.k != k:
        raise ValueError(f"validation table is for k={table.k}, not k={k}")
    if validate and k in _VALIDATED:
        return _VALIDATED[k]
    if k not in _ORACLE_CACHE:
        _ORACLE_CACHE[k] = residue_main_term_coeffs(k)
    coeffs = _ORACLE_CACHE[k]
    poly = MainTermPolynomial(k, coeffs, "residue-oracle")
    if not validate:
        return poly
    if table is None or table.limit < _DEFAULT_FIT_LIMIT:
        if k not in _FIT_TABLE_CACHE:
            _FIT_TABLE_CACHE[k] = sieve_dk(k, _DEFAULT_FIT_LIMIT)
        table = _FIT_TABLE_CACHE[k]
    fitted = integrated_lsq_coeffs(table)
    rel = np.abs(fitted - coeffs) / np.abs(coeffs)
    if np.any(rel > FIT_RTOL):
        raise ValidationError(
            "main-term cross-validation failed: oracle "
            f"{coeffs.tolist()} vs fit {fitted.tolist()} "
            f"(relative {rel.tolist()}, tolerance {FIT_RTOL})"
        )
    _VALIDATED[k] = poly
    return poly
