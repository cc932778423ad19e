"""Counting tuples whose k-th root sums nearly cancel.

The central quantity: the number of ordered 2l-tuples from (N, 2N] with

    | n_1^{1/k} + ... + n_l^{1/k} - n_{l+1}^{1/k} - ... - n_{2l}^{1/k} |
        < delta N^{1/k},

compared against the envelope N^{2l} delta + N^l.  Root sums are formed
in double-double so that diagonal tuples (equal multisets on both
sides) land on bit-identical values, and the strict window test is
exact at that precision.  Pairs whose distance from the window boundary
is below ``BOUNDARY_TOL`` are counted per the strict rule but also
reported as flagged, never silently trusted.

Two algorithms are provided: an all-pairs scan for small N, and a
sorted multiplicity-compressed sweep that scales to N in the hundreds
and can spill sorted blocks to temporary files under a memory budget.
"""

from __future__ import annotations

import heapq
import math
import tempfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dd
from .errors import DomainError, ResourceBudgetError

BOUNDARY_TOL = 1e-24
_BYTES_PER_ENTRY = 48  # value pair + multiplicity + sort workspace
_MIN_BLOCK_ENTRIES = 1024
_MERGE_READ = 4096


@dataclass(frozen=True)
class CountResult:
    """One window count with its comparison envelopes."""

    k: int
    l: int
    N: int
    delta: float
    count: int
    flagged_boundary_pairs: int

    @property
    def bound_main(self) -> float:
        return float(self.N) ** (2 * self.l) * self.delta

    @property
    def bound_diag(self) -> float:
        return float(self.N) ** self.l

    @property
    def window(self) -> float:
        return self.delta * float(self.N) ** (1.0 / self.k)

    @property
    def ratio(self) -> float:
        return self.count / max(self.bound_main, self.bound_diag)


def ordered_diagonal_count(l: int, N: int) -> int:
    """Ordered 2l-tuples whose halves are equal as multisets.

    These satisfy the window condition for every positive delta, so they
    are the guaranteed floor of any count.
    """
    if N < 1:
        raise DomainError("N must be positive")
    if l == 2:
        return 2 * N * N - N
    if l == 3:
        # run shapes 1+1+1, 2+1, 3 with squared permutation weights
        return (
            36 * (N * (N - 1) * (N - 2) // 6)
            + 9 * N * (N - 1)
            + N
        )
    raise DomainError(f"l must be 2 or 3, got l={l}")


def _roots_dd(k: int, N: int) -> tuple[np.ndarray, np.ndarray]:
    n = np.arange(N + 1, 2 * N + 1, dtype=np.float64)
    return dd.root(n, np.zeros_like(n), k)


def _validate(k: int, l: int, N: int, delta: float) -> None:
    if not 2 <= k <= 6:
        raise DomainError(f"need 2 <= k <= 6, got k={k}")
    if l not in (2, 3):
        raise DomainError(f"half-tuple size must be 2 or 3, got l={l}")
    if N < 3:
        raise DomainError(f"need N >= 3, got N={N}")
    if not delta > 0:
        raise DomainError(f"need delta > 0, got delta={delta}")


def _canonical_sum_batches(rh: np.ndarray, rl: np.ndarray, l: int):
    """Yield (hi, lo, mult) batches over nondecreasing index tuples.

    Each multiset of indices appears exactly once, summed in one fixed
    order, with its permutation count as multiplicity; permuted tuples
    therefore share one bit-identical double-double value.
    """
    N = rh.size
    if l == 2:
        for i in range(N):
            h, lo_ = dd.add(rh[i], rl[i], rh[i:], rl[i:])
            mult = np.full(N - i, 2, dtype=np.int64)
            mult[0] = 1
            yield h, lo_, mult
    else:
        for i in range(N):
            for j in range(i, N):
                ph, pl = dd.add(rh[i], rl[i], rh[j], rl[j])
                h, lo_ = dd.add(ph, pl, rh[j:], rl[j:])
                mult = np.full(N - j, 3 if i == j else 6, dtype=np.int64)
                mult[0] = 1 if i == j else 3
                yield h, lo_, mult


def _compress(h: np.ndarray, lo: np.ndarray, mult: np.ndarray):
    """Sort by value and merge equal values, summing multiplicities."""
    order = np.lexsort((lo, h))
    h = h[order]
    lo = lo[order]
    mult = mult[order]
    new = np.empty(h.size, dtype=bool)
    new[0] = True
    new[1:] = (h[1:] != h[:-1]) | (lo[1:] != lo[:-1])
    starts = np.flatnonzero(new)
    return h[starts], lo[starts], np.add.reduceat(mult, starts)


def _strictly_inside(vh: float, vl: float, fh: float, fl: float,
                     window: float) -> bool:
    """Exact test for (v - f) < window with v >= f, ambiguity-free.

    A double-precision gap check resolves all pairs far from the
    boundary; the remainder go through the full double-double
    subtraction.
    """
    gap = vh - fh
    if gap < window - 1e-9:
        return True
    if gap > window + 1e-9:
        return False
    dh, dl = dd.sub(vh, vl, fh, fl)
    eh, el = dd.sub(dh, dl, window, 0.0)
    return bool(eh < 0.0 or (eh == 0.0 and el < 0.0))


def _sweep(entries, window: float) -> int:
    """Ordered near-pairs in an ascending (hi, lo, mult) stream.

    Counts sum(m_i * m_j) over value pairs closer than ``window``
    (strictly), including i = j, via a sliding window that maintains the
    multiplicity total of values currently in range.
    """
    if window <= 0.0:
        return 0
    total = 0
    in_window = 0  # multiplicity sum of retained earlier values
    buf: list = []  # retained (hi, lo, mult), ascending
    head = 0
    for vh, vl, m in entries:
        m = int(m)
        while head < len(buf) and not _strictly_inside(
            vh, vl, buf[head][0], buf[head][1], window
        ):
            in_window -= buf[head][2]
            head += 1
        if head > 512 and head * 2 > len(buf):
            del buf[:head]
            head = 0
        total += m * m + 2 * m * in_window
        buf.append((vh, vl, m))
        in_window += m
    return total


def _counts_with_flags(stream_factory, window: float) -> tuple[int, int]:
    """Window count plus the number of pairs within BOUNDARY_TOL of the
    boundary, obtained by widening and narrowing the window."""
    count = _sweep(stream_factory(), window)
    wide = _sweep(stream_factory(), window + BOUNDARY_TOL)
    narrow = _sweep(stream_factory(), window - BOUNDARY_TOL)
    return count, wide - narrow


def _count_naive(rh: np.ndarray, rl: np.ndarray, l: int,
                 window: float) -> tuple[int, int]:
    """All-pairs scan over every ordered l-tuple sum."""
    N = rh.size
    sh, sl = dd.add(rh[:, None], rl[:, None], rh[None, :], rl[None, :])
    sh = sh.ravel()
    sl = sl.ravel()
    if l == 3:
        th, tl = dd.add(sh[:, None], sl[:, None], rh[None, :], rl[None, :])
        sh = th.ravel()
        sl = tl.ravel()
    count = 0
    flagged = 0
    chunk = max(1, (1 << 22) // sh.size)
    for lo in range(0, sh.size, chunk):
        hi = min(lo + chunk, sh.size)
        dh, dl_ = dd.sub(sh[lo:hi, None], sl[lo:hi, None],
                         sh[None, :], sl[None, :])
        ah, al = dd.abs_(dh, dl_)
        count += int(np.count_nonzero(dd.less(ah, al, window, 0.0)))
        wide = np.count_nonzero(dd.less(ah, al, window + BOUNDARY_TOL, 0.0))
        narrow = np.count_nonzero(dd.less(ah, al, window - BOUNDARY_TOL, 0.0))
        flagged += int(wide) - int(narrow)
    return count, flagged


class _BlockWriter:
    """Accumulates sum batches and spills sorted blocks to disk."""

    def __init__(self, directory: Path, block_entries: int):
        self.dir = directory
        self.block_entries = block_entries
        self.paths: list[Path] = []
        self._hs: list = []
        self._ls: list = []
        self._ms: list = []
        self._buffered = 0

    def push(self, h, lo, mult) -> None:
        self._hs.append(h)
        self._ls.append(lo)
        self._ms.append(mult)
        self._buffered += h.size
        if self._buffered >= self.block_entries:
            self.flush()

    def flush(self) -> None:
        if not self._buffered:
            return
        h, lo, mult = _compress(
            np.concatenate(self._hs),
            np.concatenate(self._ls),
            np.concatenate(self._ms).astype(np.float64),
        )
        path = self.dir / f"block{len(self.paths):05d}.npy"
        np.save(path, np.vstack([h, lo, mult]))
        self.paths.append(path)
        self._hs.clear()
        self._ls.clear()
        self._ms.clear()
        self._buffered = 0


def _block_reader(path: Path):
    data = np.load(path, mmap_mode="r")
    n = data.shape[1]
    for lo in range(0, n, _MERGE_READ):
        hi = min(lo + _MERGE_READ, n)
        chunk = np.asarray(data[:, lo:hi])
        for i in range(hi - lo):
            yield chunk[0, i], chunk[1, i], chunk[2, i]


def _count_sorted(k: int, l: int, N: int, window: float,
                  memory_budget: int | None) -> tuple[int, int]:
    """Sorted-sweep count, spilling to temporary files when the budget
    cannot hold all canonical sums at once."""
    rh, rl = _roots_dd(k, N)
    total_entries = math.comb(N + l - 1, l)
    if memory_budget is None or memory_budget >= total_entries * _BYTES_PER_ENTRY:
        hs, ls, ms = [], [], []
        for h, lo, mult in _canonical_sum_batches(rh, rl, l):
            hs.append(h)
            ls.append(lo)
            ms.append(mult)
        h, lo, mult = _compress(
            np.concatenate(hs), np.concatenate(ls), np.concatenate(ms)
        )

        def factory():
            return zip(h, lo, mult)

        return _counts_with_flags(factory, window)

    block_entries = memory_budget // _BYTES_PER_ENTRY
    if block_entries < _MIN_BLOCK_ENTRIES:
        raise ResourceBudgetError(
            f"memory budget {memory_budget} bytes is below one minimum "
            f"block ({_MIN_BLOCK_ENTRIES * _BYTES_PER_ENTRY} bytes)"
        )
    with tempfile.TemporaryDirectory(prefix="rootsums") as tmp:
        writer = _BlockWriter(Path(tmp), block_entries)
        for h, lo, mult in _canonical_sum_batches(rh, rl, l):
            writer.push(h, lo, mult)
        writer.flush()

        def factory():
            return heapq.merge(*(_block_reader(p) for p in writer.paths))

        return _counts_with_flags(factory, window)


def count_quadruples(k: int, N: int, delta: float,
                     algo: str = "sorted-window") -> CountResult:
    """Ordered quadruples from (N, 2N] with nearly cancelling root sums.

    ``naive`` scans all pair-sum pairs and is restricted to N <= 64;
    ``sorted-window`` sorts the compressed pair sums and sweeps.  The
    two agree exactly because they share arithmetic and window rule.
    """
    _validate(k, 2, N, delta)
    window = delta * N ** (1.0 / k)
    if algo == "naive":
        if N > 64:
            raise DomainError(f"naive algorithm is restricted to N <= 64, got N={N}")
        count, flagged = _count_naive(*_roots_dd(k, N), 2, window)
    elif algo == "sorted-window":
        count, flagged = _count_sorted(k, 2, N, window, None)
    else:
        raise DomainError(f"unknown algorithm {algo!r}")
    return CountResult(k=k, l=2, N=N, delta=float(delta), count=count,
                       flagged_boundary_pairs=flagged)


def count_2l_tuples(k: int, l: int, N: int, delta: float,
                    memory_budget: int | None = None) -> CountResult:
    """Window count for ordered 2l-tuples, l in {2, 3}.

    With a memory budget the canonical sums stream through sorted
    on-disk blocks; the result is identical to the in-memory path.
    """
    _validate(k, l, N, delta)
    window = delta * N ** (1.0 / k)
    count, flagged = _count_sorted(k, l, N, window, memory_budget)
    return CountResult(k=k, l=l, N=N, delta=float(delta), count=count,
                       flagged_boundary_pairs=flagged)


def count_2l_naive(k: int, l: int, N: int, delta: float) -> CountResult:
    """Brute-force oracle over all N^{2l} ordered tuples; tiny N only."""
    _validate(k, l, N, delta)
    if N ** (2 * l) > 1 << 28:
        raise DomainError(f"brute force over N^{2 * l} tuples is too large for N={N}")
    window = delta * N ** (1.0 / k)
    count, flagged = _count_naive(*_roots_dd(k, N), l, window)
    return CountResult(k=k, l=l, N=N, delta=float(delta), count=count,
                       flagged_boundary_pairs=flagged)


@dataclass(frozen=True)
class BoundReport:
    """Count-to-envelope ratios with their log-N trend."""

    rows: tuple  # (k, l, N, delta, count, bound_main, bound_diag, ratio, flagged)
    trend_slope: float | None  # d log(ratio) / d log(N); None below 2 distinct N


def bound_report(results) -> BoundReport:
    """Tabulate count/max(envelope) per result and fit the N-trend.

    A sub-polynomial trend (slope near zero) is what the envelope with
    its quality factor predicts; the slope is reported, not asserted.
    """
    results = list(results)
    if not results:
        raise DomainError("need at least one count result")
    rows = tuple(
        (r.k, r.l, r.N, r.delta, r.count, r.bound_main, r.bound_diag,
         r.ratio, r.flagged_boundary_pairs)
        for r in results
    )
    slope = None
    if len({r.N for r in results}) >= 2:
        slope = float(
            np.polyfit(
                np.log([r.N for r in results]),
                np.log([max(r.ratio, 1e-300) for r in results]),
                1,
            )[0]
        )
    return BoundReport(rows=rows, trend_slope=slope)
