"""Scanning Delta_2 for extreme values: record sizes against the
x^(1/4) scale and the lower-bound threshold, the growth exponent
squeezed between its known brackets, and short divisor intervals.

Run as:  python3 demos/extrema_scan.py
"""

import time

from divisorlab import DeltaEvaluator
from divisorlab.omega import (
    estimate_alpha,
    gk_threshold,
    scan_extrema,
    shiu_sweep,
)


def main() -> None:
    ev = DeltaEvaluator.for_k(2, 10**6)
    t0 = time.perf_counter()
    scan = scan_extrema(ev, x_max=10**6)
    print(f"scanned 3 samples per unit interval up to 10^6 "
          f"in {time.perf_counter() - t0:.1f}s")

    print("\ntop records by |Delta| / x^(1/4):")
    for rec in scan.top_power[:5]:
        print(f"  x = {rec.x:>12,.1f}   Delta = {rec.delta_value:+9.3f}   "
              f"ratio {rec.ratio_power:.3f}   vs threshold "
              f"{rec.ratio_G:.3f}")
    print(f"threshold G_2(10^6) for comparison: {gk_threshold(2, 1e6):.2f}")

    pos = scan.longest_positive_run
    neg = scan.longest_negative_run
    print(f"\nlongest constant-sign stretches: positive "
          f"[{pos[0]:,.0f}, {pos[1]:,.0f}], negative "
          f"[{neg[0]:,.0f}, {neg[1]:,.0f}]")

    alpha = estimate_alpha(scan.envelope, x_min_fit=100.0)
    print(f"\nenvelope growth exponent estimate: {alpha:.4f}")
    print(f"known brackets: 1/4 = 0.25 from below, "
          f"131/416 = {131 / 416:.4f} from above")

    rows = shiu_sweep(ev.table, sample_count=500, rng_seed=0)
    worst = max(r[3] for r in rows)
    print(f"\nshort-interval divisor sums, 500 random (x, h): "
          f"max sum / (h log x) = {worst:.3f}")


if __name__ == "__main__":
    main()
