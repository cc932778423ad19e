"""Exact tables of the k-fold divisor function and its summatory function.

d_k(n) counts the ordered k-tuples of positive integers whose product is
n, so d_1 is identically 1 and d_2 = d is the ordinary divisor count.
Tables are exact integer data.  The summatory function
D_k(x) = sum_{n <= x} d_k(n) is available both as a table prefix sum and,
for k = 2 and k = 3, through floor-sum identities over the hyperbolic
region that need no table at all:

    D_2(x) = 2 * sum_{a <= sqrt(x)} floor(x/a) - floor(sqrt(x))^2

and for k = 3 an enumeration of sorted factor triples a <= b <= c with
the largest factor counted as a block, which costs O(x^{2/3}) divisions.
The convention at jumps is right-continuous: the term n = floor(x) is
included in full.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, OverflowCheckError, UnsupportedMethodError

MAX_K = 6
_INT32_MAX = 2**31 - 1


def safe_floor(x: float) -> int:
    """Integer floor with a one-ulp snap to the nearest integer.

    A value within one ulp of an integer is treated as that integer, so
    table indexing cannot flip on representation noise such as
    2.9999999999999996 arriving where 3 was meant.
    """
    r = round(x)
    if abs(x - r) <= math.ulp(x):
        return int(r)
    return math.floor(x)


class DivisorTable:
    """Immutable table of d_k(n) for 1 <= n <= limit.

    ``values[n]`` holds d_k(n) as int32 (counts are verified to fit at
    build time); index 0 is unused.  The int64 prefix array materialises
    lazily on first use.  Memory: 4 bytes per entry for the values plus 8
    per entry once the prefix sums exist.  Instances are safe to share
    between threads once constructed.
    """

    __slots__ = ("k", "limit", "values", "_prefix")

    def __init__(self, k: int, limit: int, values: np.ndarray):
        if values.shape != (limit + 1,):
            raise ValueError("values must have shape (limit + 1,)")
        self.k = int(k)
        self.limit = int(limit)
        values.setflags(write=False)
        self.values = values
        self._prefix = None

    @property
    def prefix(self) -> np.ndarray:
        """D_k(n) as int64 with prefix[0] = 0."""
        if self._prefix is None:
            p = np.empty(self.limit + 1, dtype=np.int64)
            p[0] = 0
            np.cumsum(self.values[1:], dtype=np.int64, out=p[1:])
            p.setflags(write=False)
            self._prefix = p
        return self._prefix

    def d(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise DomainError(f"n={n} outside table range [1, {self.limit}]")
        return int(self.values[n])

    def summatory(self, n: int) -> int:
        if not 0 <= n <= self.limit:
            raise DomainError(f"n={n} outside table range [0, {self.limit}]")
        return int(self.prefix[n])

    def __repr__(self):
        return f"DivisorTable(k={self.k}, limit={self.limit})"


def _iroot(q: int, r: int) -> int:
    """floor(q ** (1/r)), exact for q >= 0."""
    if q <= 0:
        return 0
    a = int(round(q ** (1.0 / r)))
    while a > 1 and a**r > q:
        a -= 1
    while (a + 1) ** r <= q:
        a += 1
    return a


def _tuple_sieve(k: int, limit: int) -> np.ndarray:
    """d_k table by enumerating sorted factor multisets.

    Multisets a_1 <= ... <= a_k with product <= limit are walked
    recursively; the last factor is swept as an array slice and each
    multiset is weighted by its number of distinct orderings.  The slice
    count is O(limit^{(k-1)/k}), so the Python-level overhead stays small
    even at limit = 10^7 while the element work is the usual
    O(limit log^{k-1} limit).
    """
    out = np.zeros(limit + 1, dtype=np.int64)
    kf = math.factorial(k)

    def descend(chosen, prod, last, run_len, denom):
        # denom carries the factorials of the closed runs of equal
        # factors; (last, run_len) is the trailing run still open.
        if chosen == k - 1:
            out[prod * last] += kf // (denom * math.factorial(run_len + 1))
            w = kf // (denom * math.factorial(run_len))
            start = prod * (last + 1)
            if start <= limit:
                out[start::prod] += w
            return
        top = _iroot(limit // prod, k - chosen)
        if last <= top:
            descend(chosen + 1, prod * last, last, run_len + 1, denom)
        new_denom = denom * math.factorial(run_len)
        for a in range(last + 1, top + 1):
            descend(chosen + 1, prod * a, a, 1, new_denom)

    if k == 1:
        out[1:] = 1
    else:
        descend(0, 1, 1, 0, 1)
    return out


def _convolution_sieve(k: int, limit: int) -> np.ndarray:
    """Reference d_k table by k-1 successive Dirichlet convolutions with 1.

    O(limit) slice operations per convolution; meant for cross-checks at
    moderate limits, not for the production tables.
    """
    vals = np.zeros(limit + 1, dtype=np.int64)
    vals[1:] = 1
    for _ in range(k - 1):
        out = np.zeros(limit + 1, dtype=np.int64)
        for a in range(1, limit + 1):
            out[a::a] += vals[1 : limit // a + 1]
        vals = out
    return vals


def sieve_dk(k: int, limit: int) -> DivisorTable:
    """Exact d_k(n) for all n <= limit.

    Counts are built in int64 and checked to fit 32 bits before the table
    is frozen (they do for every limit <= 10^9, k <= 6 by a wide margin).
    """
    if not 1 <= k <= MAX_K:
        raise DomainError(f"k={k} outside supported range [1, {MAX_K}]")
    if limit < 1:
        raise DomainError("empty domain: limit must be >= 1")
    if limit > _INT32_MAX:
        raise DomainError(f"limit={limit} beyond supported table size")
    raw = _tuple_sieve(k, int(limit))
    if int(raw.max(initial=0)) > _INT32_MAX:
        raise OverflowCheckError(
            f"d_{k} exceeds 32-bit counts at limit={limit}"
        )
    return DivisorTable(k, int(limit), raw.astype(np.int32))


def _hyperbola_d2(n: int) -> int:
    r = math.isqrt(n)
    a = np.arange(1, r + 1, dtype=np.int64)
    return int(2 * int(np.sum(n // a)) - r * r)


def _hyperbola_d3(n: int) -> int:
    # sorted triples a <= b <= c, abc <= n; the c-range is counted in one
    # division, with permutation weights 1/3/6 by the equality pattern
    total = 0
    a = 1
    while a * a * a <= n:
        m = n // a
        b = np.arange(a, math.isqrt(m) + 1, dtype=np.int64)
        cmax = m // b
        tie = b == a
        w_eq = np.where(tie, 1, 3)       # c == b
        w_gt = np.where(tie, 3, 6)       # c > b
        total += int(np.sum(w_eq + w_gt * (cmax - b)))
        a += 1
    return total


def summatory_dk(k: int, x, method: str = "sieve-prefix",
                 table: DivisorTable | None = None) -> int:
    """D_k(floor(x)) as an exact integer.

    ``sieve-prefix`` reads the prefix array of a supplied table;
    ``hyperbola`` evaluates the floor-sum identity directly (k = 2 or 3
    only).  Both must agree exactly wherever both apply.
    """
    if x < 1:
        raise DomainError(f"x={x} below 1")
    n = safe_floor(float(x))
    if method == "sieve-prefix":
        if table is None:
            raise ValueError("sieve-prefix needs a DivisorTable")
        if table.k != k:
            raise ValueError(f"table is for k={table.k}, asked for k={k}")
        if n > table.limit:
            raise DomainError(f"x={x} beyond table limit {table.limit}")
        return int(table.prefix[n])
    if method == "hyperbola":
        if k == 2:
            return _hyperbola_d2(n)
        if k == 3:
            return _hyperbola_d3(n)
        raise UnsupportedMethodError(
            f"hyperbola method implemented for k=2,3 only, got k={k}"
        )
    raise UnsupportedMethodError(f"unknown summatory method {method!r}")
