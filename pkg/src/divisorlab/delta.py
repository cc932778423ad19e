"""The divisor-problem error term Delta_k(x) = D_k(x) - x P_{k-1}(log x).

Right-continuous at the integers: the jump at n has height d_k(n) and the
value at x = n already includes it.
"""

from __future__ import annotations

import numpy as np

from .divisor_core import DivisorTable, safe_floor, sieve_dk
from .errors import DomainError
from .main_term import MainTermPolynomial, main_term_coeffs


class DeltaEvaluator:
    """Bundles a divisor table with its main-term polynomial.

    The core evaluation primitive for everything downstream: scalar and
    vectorised Delta_k, the main term alone, jumps and prefix values.
    Valid for 1 <= x < limit + 1 (the last table entry covers the whole
    unit interval it opens).
    """

    __slots__ = ("table", "poly")

    def __init__(self, table: DivisorTable, poly: MainTermPolynomial):
        if table.k != poly.k:
            raise ValueError(
                f"table k={table.k} and polynomial k={poly.k} disagree"
            )
        self.table = table
        self.poly = poly

    @classmethod
    def for_k(cls, k: int, limit: int,
              table: DivisorTable | None = None) -> "DeltaEvaluator":
        if table is None:
            table = sieve_dk(k, limit)
        poly = main_term_coeffs(k, table=table if k != 2 else None)
        return cls(table, poly)

    @property
    def k(self) -> int:
        return self.table.k

    @property
    def limit(self) -> int:
        return self.table.limit

    def main_term(self, x):
        return self.poly.main_term(x)

    def jump(self, n: int) -> int:
        """Jump height of D_k at n, i.e. d_k(n)."""
        return self.table.d(n)

    def summatory(self, n: int) -> int:
        return self.table.summatory(n)

    def delta(self, x) -> float:
        x = float(x)
        n = safe_floor(x)
        if not 1 <= n <= self.limit:
            raise DomainError(
                f"x={x} outside evaluator range [1, {self.limit + 1})"
            )
        return float(self.table.prefix[n] - x * self.poly.poly(np.log(x)))

    def delta_many(self, xs) -> np.ndarray:
        """Vectorised Delta_k with the same one-ulp floor snapping as the
        scalar path."""
        xs = np.asarray(xs, dtype=np.float64)
        r = np.rint(xs)
        snap = np.abs(xs - r) <= np.spacing(np.abs(xs))
        ns = np.where(snap, r, np.floor(xs)).astype(np.int64)
        if ns.size and not (1 <= int(ns.min()) and int(ns.max()) <= self.limit):
            raise DomainError(
                f"samples outside evaluator range [1, {self.limit + 1})"
            )
        D = self.table.prefix[ns].astype(np.float64)
        return D - xs * self.poly.poly(np.log(xs))


def delta_k(k: int, x, evaluator: DeltaEvaluator) -> float:
    """Delta_k(x) through a prepared evaluator; k is checked for safety."""
    if evaluator.k != k:
        raise ValueError(f"evaluator is for k={evaluator.k}, asked for k={k}")
    return evaluator.delta(x)
