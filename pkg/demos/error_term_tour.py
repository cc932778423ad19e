"""The error term Delta_k: main-term polynomials, pointwise values and
the size of the fluctuations decade by decade.

Run as:  python3 demos/error_term_tour.py
"""

import numpy as np

from divisorlab import DeltaEvaluator
from divisorlab.main_term import main_term_coeffs


def main() -> None:
    print("main-term polynomial coefficients (constant term first):")
    for k in (2, 3, 4):
        poly = main_term_coeffs(k)
        pretty = ", ".join(f"{c:.12f}" for c in poly.coeffs)
        print(f"  k={k} ({poly.provenance}): [{pretty}]")

    ev = DeltaEvaluator.for_k(2, 10**6)
    print("\npointwise Delta_2 around a jump at n = 1000 (d(1000) = 16):")
    for x in (999.5, 1000.0 - 1e-9, 1000.0, 1000.5):
        print(f"  Delta(1000{x - 1000:+.10f}) = {ev.delta(x):+10.4f}")

    print("\nper-decade rms of Delta_2 / x^(1/4), 4096 samples each:")
    rng = np.random.default_rng(2)
    for decade in range(2, 6):
        xs = 10.0 ** rng.uniform(decade, decade + 1, 4096)
        scaled = ev.delta_many(xs) / xs**0.25
        rms = float(np.sqrt(np.mean(scaled**2)))
        peak = float(np.max(np.abs(scaled)))
        print(f"  x in [1e{decade}, 1e{decade + 1}):  rms {rms:.3f}   "
              f"max {peak:.3f}")
    print("the rms stays put while x spans four decades: the main term")
    print("is right and what is left fluctuates on the x^(1/4) scale")


if __name__ == "__main__":
    main()
