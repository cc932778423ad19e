"""Moments of Delta_2 over long ranges and short windows: the
mean-square constant emerging, the fourth moment stabilising, and the
short-interval budget holding with room to spare.

Run as:  python3 demos/moments_and_intervals.py
"""

import math

from divisorlab import DeltaEvaluator
from divisorlab.moments import (
    fit_moment_constant,
    interval_average,
    mean_square_constant_exact_k2,
    short_interval_fourth_moment,
)


def main() -> None:
    ev = DeltaEvaluator.for_k(2, 10**6 + 2 * 10**4)
    exact = mean_square_constant_exact_k2()
    print(f"limiting mean-square constant for k = 2: {exact:.6f}")
    print("normalised second moment climbing toward it:")
    fit = fit_moment_constant(ev, 2, [10**3, 10**4, 10**5, 10**6])
    for X, value in fit.residual_series:
        print(f"  X = 1e{int(math.log10(X))}:  {value:.6f}   "
              f"({value / exact:.1%} of the limit)")

    print("\nnormalised fourth moment (limit constant not known in")
    print("closed form; watch it settle):")
    fit4 = fit_moment_constant(ev, 4, [10**3, 10**4, 10**5, 10**6])
    for X, value in fit4.residual_series:
        print(f"  X = 1e{int(math.log10(X))}:  {value:.6f}")

    X, H = 10**6, 10**4
    value, (linear, saturated) = short_interval_fourth_moment(ev, X, H)
    budget = 100.0 * math.log(X) ** 3 * (linear + saturated)
    print(f"\nfourth moment over [X-H, X+H] at X=1e6, H=1e4: {value:.3e}")
    print(f"budget 100 log^3(X) (HX + X^(8/5) H^(1/5)):    {budget:.3e}")
    print(f"headroom factor: {budget / value:.1e}")

    average, deviation = interval_average(ev, 123456.0, 300.0)
    print(f"\nlocal average of Delta_2 over [123456, 123756]: {average:+.4f}")
    print(f"Delta_2(123456) sits {deviation:+.4f} away; scaled by "
          f"H log X: {abs(deviation) / (300.0 * math.log(123456.0)):.5f}")


if __name__ == "__main__":
    main()
