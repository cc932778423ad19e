"""Double-double primitives against exact rational and mpmath oracles."""

from fractions import Fraction

import mpmath
import numpy as np
import pytest

from divisorlab import dd


def _dd_to_mpf(h, l):
    return mpmath.mpf(float(h)) + mpmath.mpf(float(l))


def test_two_sum_is_exact_in_rationals(rng):
    a = rng.uniform(-1e12, 1e12, size=200)
    b = rng.uniform(-1e-6, 1e6, size=200)
    s, e = dd.two_sum(a, b)
    for ai, bi, si, ei in zip(a, b, s, e):
        assert Fraction(ai) + Fraction(bi) == Fraction(si) + Fraction(ei)


def test_two_prod_is_exact_in_rationals(rng):
    a = rng.uniform(-1e8, 1e8, size=200)
    b = rng.uniform(-1e8, 1e8, size=200)
    p, e = dd.two_prod(a, b)
    for ai, bi, pi, ei in zip(a, b, p, e):
        assert Fraction(ai) * Fraction(bi) == Fraction(pi) + Fraction(ei)


def test_quick_two_sum_matches_two_sum_when_ordered(rng):
    a = rng.uniform(1e3, 1e9, size=100)
    b = rng.uniform(-1.0, 1.0, size=100)
    s1, e1 = dd.two_sum(a, b)
    s2, e2 = dd.quick_two_sum(a, b)
    assert np.array_equal(s1, s2)
    assert np.array_equal(e1, e2)


@pytest.mark.parametrize("op", ["add", "sub", "mul", "div"])
def test_binary_ops_carry_about_30_digits(op, rng):
    xh = rng.uniform(0.5, 100.0, size=50)
    xl = xh * rng.uniform(-1e-17, 1e-17, size=50)
    yh = rng.uniform(0.5, 100.0, size=50)
    yl = yh * rng.uniform(-1e-17, 1e-17, size=50)
    rh, rl = getattr(dd, op)(xh, xl, yh, yl)
    with mpmath.workdps(50):
        for i in range(50):
            x = _dd_to_mpf(xh[i], xl[i])
            y = _dd_to_mpf(yh[i], yl[i])
            want = {
                "add": x + y, "sub": x - y, "mul": x * y, "div": x / y,
            }[op]
            got = _dd_to_mpf(rh[i], rl[i])
            assert abs(got - want) <= abs(want) * mpmath.mpf(10) ** -29


def test_scalar_helpers_against_mpmath():
    with mpmath.workdps(50):
        h, l = dd.add_d(np.float64(1.0), np.float64(0.0), np.float64(1e-20))
        assert abs(_dd_to_mpf(h, l) - (1 + mpmath.mpf(10) ** -20)) < 1e-35
        h, l = dd.mul_d(np.float64(np.pi), np.float64(0.0), np.float64(3.0))
        assert abs(_dd_to_mpf(h, l) - 3 * mpmath.mpf(np.pi)) < 1e-30


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_root_has_dd_accuracy(k, rng):
    a = rng.uniform(1.0, 1e12, size=40)
    rh, rl = dd.root(a, np.zeros_like(a), k)
    with mpmath.workdps(50):
        for ai, hi, li in zip(a, rh, rl):
            want = mpmath.mpf(ai) ** (mpmath.mpf(1) / k)
            assert abs(_dd_to_mpf(hi, li) - want) <= want * mpmath.mpf(10) ** -28


def test_root_k1_is_identity():
    h, l = dd.root(np.float64(7.25), np.float64(1e-20), 1)
    assert h == 7.25 and l == 1e-20


def test_npow_matches_repeated_mul():
    h, l = dd.npow(np.float64(1.5), np.float64(1e-18), 3)
    h2, l2 = dd.mul(*dd.mul(1.5, 1e-18, 1.5, 1e-18), 1.5, 1e-18)
    assert h == h2 and l == l2


def test_npow_and_root_reject_bad_exponents():
    with pytest.raises(ValueError):
        dd.npow(1.0, 0.0, 0)
    with pytest.raises(ValueError):
        dd.root(1.0, 0.0, 0)


def test_mod1_keeps_fractional_part(rng):
    x = rng.uniform(0, 1e9, size=100)
    xl = np.zeros_like(x)
    fh, fl = dd.mod1(x, xl)
    frac = fh + fl
    assert np.all(frac > -1e-12)
    assert np.all(frac < 1.0 + 1e-12)
    # the dropped part is an exact integer
    assert np.array_equal(x - fh, np.floor(x))


def test_mod1_preserves_tiny_low_word():
    # 10^9 + 1e-20: the fractional part lives entirely in the low word
    fh, fl = dd.mod1(np.float64(1e9), np.float64(1e-20))
    assert fh + fl == pytest.approx(1e-20, abs=1e-32)


def test_less_and_abs_use_both_words():
    assert dd.less(np.float64(1.0), np.float64(-1e-20),
                   np.float64(1.0), np.float64(0.0))
    assert not dd.less(np.float64(1.0), np.float64(0.0),
                       np.float64(1.0), np.float64(-1e-20))
    h, l = dd.abs_(np.float64(-3.0), np.float64(1e-18))
    assert h == 3.0 and l == -1e-18
    h, l = dd.abs_(np.float64(0.0), np.float64(-1e-18))
    assert l == 1e-18


def test_broadcasting_mixes_scalars_and_arrays():
    xs = np.array([1.0, 2.0, 3.0])
    h, l = dd.add_d(xs, np.zeros(3), 0.5)
    assert h.shape == (3,)
    assert np.array_equal(h, xs + 0.5)
    h, l = dd.mul(xs, np.zeros(3), np.float64(2.0), np.float64(0.0))
    assert np.array_equal(h, xs * 2)


def test_to_float_collapses_pair():
    assert dd.to_float(np.float64(1.5), np.float64(0.25)) == 1.75
