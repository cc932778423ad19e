"""Vectorised double-double arithmetic (pairs of float64, ~32 digits).

Classic error-free transforms (Dekker splitting, Knuth two-sum) lifted to
numpy arrays.  A value is a normalised (hi, lo) pair with |lo| bounded by
half an ulp of hi.  Only what the package needs is provided: add/sub/mul/
div, small integer powers, k-th roots by Newton iteration, and mod-1
reduction for phase arguments.  Everything broadcasts like the underlying
numpy operations, so scalars and arrays mix freely.
"""

from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    """Exact sum: s + err == a + b with s = fl(a + b)."""
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    """two_sum under the precondition |a| >= |b| (elementwise)."""
    s = a + b
    return s, b - (s - a)


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    """Exact product: p + err == a * b with p = fl(a * b)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(xh, xl, yh, yl):
    sh, se = two_sum(xh, yh)
    th, te = two_sum(xl, yl)
    se = se + th
    sh, se = quick_two_sum(sh, se)
    se = se + te
    return quick_two_sum(sh, se)


def sub(xh, xl, yh, yl):
    return add(xh, xl, -yh, -yl)


def add_d(xh, xl, b):
    sh, se = two_sum(xh, b)
    se = se + xl
    return quick_two_sum(sh, se)


def mul(xh, xl, yh, yl):
    ph, pe = two_prod(xh, yh)
    pe = pe + (xh * yl + xl * yh)
    return quick_two_sum(ph, pe)


def mul_d(xh, xl, b):
    ph, pe = two_prod(xh, b)
    pe = pe + xl * b
    return quick_two_sum(ph, pe)


def div(xh, xl, yh, yl):
    # long division with two correction terms; good to the last dd bit
    q1 = xh / yh
    rh, rl = sub(xh, xl, *mul_d(yh, yl, q1))
    q2 = rh / yh
    rh, rl = sub(rh, rl, *mul_d(yh, yl, q2))
    q3 = rh / yh
    qh, ql = quick_two_sum(q1, q2)
    return add_d(qh, ql, q3)


def npow(xh, xl, n: int):
    """x**n for small positive integer n."""
    if n < 1:
        raise ValueError("npow needs n >= 1")
    rh, rl = xh, xl
    for _ in range(n - 1):
        rh, rl = mul(rh, rl, xh, xl)
    return rh, rl


def root(ah, al, k: int):
    """k-th root of a > 0 with two Newton steps from a float64 seed."""
    if k < 1:
        raise ValueError("root needs k >= 1")
    ah = np.asarray(ah, dtype=np.float64)
    al = np.asarray(al, dtype=np.float64)
    if k == 1:
        return ah, al
    rh = ah ** (1.0 / k)
    rl = np.zeros_like(rh)
    for _ in range(2):
        ph, pl = npow(rh, rl, k - 1)
        fh, fl = mul(ph, pl, rh, rl)
        fh, fl = sub(fh, fl, ah, al)
        dh, dl = mul_d(ph, pl, float(k))
        qh, ql = div(fh, fl, dh, dl)
        rh, rl = sub(rh, rl, qh, ql)
    return rh, rl


def mod1(xh, xl):
    """x mod 1.  The result may drift an ulp outside [0, 1); the trig
    consumers are periodic so they do not care."""
    m = np.floor(xh)
    return quick_two_sum(xh - m, xl)


def less(xh, xl, yh, yl):
    """Elementwise x < y for normalised pairs."""
    return (xh < yh) | ((xh == yh) & (xl < yl))


def abs_(xh, xl):
    neg = (xh < 0) | ((xh == 0) & (xl < 0))
    s = np.where(neg, -1.0, 1.0)
    return xh * s, xl * s


def to_float(xh, xl):
    return xh + xl
