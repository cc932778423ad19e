"""DeltaEvaluator: jump convention, vector path, and range checks."""

import numpy as np
import pytest

from divisorlab import DeltaEvaluator, delta_k, sieve_dk
from divisorlab.errors import DomainError


def test_delta_is_right_continuous_at_integers(ev2):
    for n in (2, 10, 100, 4096):
        # one ulp below an integer snaps onto it: the evaluator is
        # right-continuous and rounding noise cannot land on the wrong
        # side of a jump (only the smooth part moves, by an ulp)
        below = np.nextafter(float(n), 0.0)
        assert ev2.delta(below) == pytest.approx(ev2.delta(float(n)), abs=1e-9)
        # a genuinely interior point just left of n sees the full jump
        jump = ev2.delta(float(n)) - ev2.delta(n - 1e-9)
        assert jump == pytest.approx(ev2.jump(n), abs=1e-5)


def test_delta_identity_with_prefix_and_main_term(ev2):
    for x in (1.0, 7.5, 1000.25, 99999.75):
        n = int(np.floor(x))
        want = ev2.table.prefix[n] - x * ev2.poly.poly(np.log(x))
        assert ev2.delta(x) == pytest.approx(float(want), rel=1e-15, abs=1e-12)


def test_vector_and_scalar_paths_agree(ev2, rng):
    xs = np.concatenate([
        rng.uniform(1.0, 9.9e4, size=100),
        np.array([2.9999999999999996, 3.0, 3.0000000000000004]),
    ])
    many = ev2.delta_many(xs)
    single = np.array([ev2.delta(float(x)) for x in xs])
    assert np.array_equal(many, single)


def test_ulp_snapping_prevents_index_flip(ev2):
    # one ulp below 3.0 must index the same table entry as 3.0
    lo = ev2.delta(2.9999999999999996)
    hi = ev2.delta(3.0)
    assert abs(lo - hi) < 1e-12


def test_out_of_range_rejected(ev2):
    with pytest.raises(DomainError):
        ev2.delta(0.5)
    with pytest.raises(DomainError):
        ev2.delta(ev2.limit + 1.5)
    with pytest.raises(DomainError):
        ev2.delta_many(np.array([0.5, 2.0]))


def test_for_k_checks_table_consistency():
    t3 = sieve_dk(3, 500)
    ev = DeltaEvaluator.for_k(3, 500, table=t3)
    assert ev.k == 3 and ev.limit == 500
    with pytest.raises(ValueError):
        delta_k(2, 10.5, ev)
    assert delta_k(3, 10.5, ev) == ev.delta(10.5)


def test_summatory_passthrough(ev2):
    assert ev2.summatory(10) == 27
    assert ev2.jump(6) == 4
