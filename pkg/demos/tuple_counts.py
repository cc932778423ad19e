"""Counting ordered tuples from (N, 2N] whose k-th root sums nearly
cancel: the diagonal floor, genuine square-root ties, and the envelope
staying ahead of the count.

Run as:  python3 demos/tuple_counts.py
"""

from divisorlab.counting import (
    bound_report,
    count_2l_tuples,
    count_quadruples,
    ordered_diagonal_count,
)


def main() -> None:
    print("quadruples (l = 2): as the window delta shrinks, the count")
    print("collapses onto the diagonal (equal multisets on both sides):")
    for delta in (0.5, 0.01, 1e-6, 1e-15):
        r = count_quadruples(3, 64, delta)
        print(f"  delta = {delta:<8g} count = {r.count:>10,}")
    print(f"  diagonal formula 2N^2 - N = {ordered_diagonal_count(2, 64):,}")

    print("\nsquare roots are different: (64, 128] contains")
    print("  sqrt(81) + sqrt(121) = 2 sqrt(100)   and")
    print("  sqrt(72) + sqrt(128) = 2 sqrt(98),")
    tied = count_quadruples(2, 64, 1e-15)
    print(f"so the k = 2 zero-window count is {tied.count:,}, "
          f"{tied.count - 8128} above the diagonal")

    print("\ncount against the envelope N^4 delta + N^2 (k = 3):")
    results = []
    for N in (64, 128, 256):
        r = count_2l_tuples(3, 2, N, 1.0 / N)
        results.append(r)
        print(f"  N = {N:>3}, delta = 1/N:  count {r.count:>12,}   "
              f"ratio {r.ratio:.3f}")
    report = bound_report(results)
    print(f"ratio trend in N (log-log slope): {report.trend_slope:+.4f}")

    print("\nsextuples (l = 3) under a 50 KB memory budget stream")
    print("through sorted on-disk blocks and agree with the in-memory path:")
    free = count_2l_tuples(3, 3, 20, 0.002)
    tight = count_2l_tuples(3, 3, 20, 0.002, memory_budget=50_000)
    print(f"  in-memory {free.count:,}   budgeted {tight.count:,}   "
          f"equal: {free.count == tight.count}")


if __name__ == "__main__":
    main()
