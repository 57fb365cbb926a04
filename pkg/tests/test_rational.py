import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from digitprimes.rational import (
    Frequency,
    dirichlet_approx,
    dirichlet_approx_batch,
    nearest_int_distance,
    nearest_int_distance_array,
)


@pytest.mark.parametrize("x,d", [(0.5, 0.5), (3.25, 0.25), (-0.1, 0.1), (7.0, 0.0)])
def test_nearest_int_distance(x, d):
    assert nearest_int_distance(x) == pytest.approx(d)


@given(st.floats(-1e6, 1e6))
def test_nearest_int_distance_range(x):
    d = nearest_int_distance(x)
    assert 0 <= d <= 0.5
    assert nearest_int_distance_array(np.array([x]))[0] == pytest.approx(d, abs=1e-9)


def test_frequency_parsing():
    assert Frequency.of("3/7") == Frequency(3, 7)
    assert Frequency.of(Fraction(10, 4)).rational == Fraction(1, 2)
    assert Frequency.of(0.25).offset == 0.25
    assert Frequency(-1, 3).num == 2
    with pytest.raises(ValueError):
        Frequency(1, 0)


def test_frequency_arithmetic():
    f = Frequency(1, 3) + Frequency(1, 6, 0.01)
    assert f.rational == Fraction(1, 2) and f.offset == 0.01
    assert (-Frequency(1, 4)).rational == Fraction(3, 4)
    assert Frequency(1, 4).shifted(0.5).value == pytest.approx(0.75)


@given(st.integers(0, 10**6), st.integers(1, 10**6), st.floats(-0.5, 0.5), st.lists(st.integers(0, 10**7), min_size=1, max_size=30))
def test_phases_are_exact(num, den, offset, ns):
    f = Frequency(num, den, offset)
    got = f.phases(np.array(ns))
    for g, n in zip(got, ns):
        exact = float((Fraction(num * n, den) + Fraction(offset) * n) % 1)
        assert min(abs(g - exact), 1 - abs(g - exact)) < 1e-15
        assert min(abs(g - f.phase(n)), 1 - abs(g - f.phase(n))) < 1e-15


def test_dirichlet_examples():
    r = dirichlet_approx(Fraction(1, 2), 10)
    assert (r.ell, r.d, r.beta) == (1, 2, 0.0)
    r = dirichlet_approx(1 / math.pi, 100)
    assert r.fraction in (Fraction(1, 3), Fraction(7, 22))
    assert r.d <= 100 and abs(1 / math.pi - r.ell / r.d) < 1 / (100 * r.d)
    r = dirichlet_approx(Fraction(250, 10**4), 100)
    assert r.fraction == Fraction(1, 40) and r.beta == 0


def _smallest_valid(alpha: Fraction, d0: int):
    for d in range(1, d0 + 1):
        ell = round(alpha * d)
        if abs(alpha * d - ell) * d0 < 1:
            return ell, d


@given(st.integers(0, 10**6), st.integers(1, 10**6), st.integers(1, 300))
def test_dirichlet_is_smallest_valid_denominator(num, den, d0):
    alpha = Fraction(num % den, den)
    r = dirichlet_approx(alpha, d0)
    assert math.gcd(r.ell, r.d) == 1 and 1 <= r.d <= d0
    assert abs(alpha - r.fraction) * r.d * d0 < 1
    ell, d = _smallest_valid(alpha, d0)
    assert r.d == d
    if d0 > 1:  # with d0 = 1 every integer ell is valid
        assert r.ell == ell


@given(st.integers(2, 10**7), st.data())
def test_batch_matches_scalar(den, data):
    d0 = data.draw(st.integers(1, math.isqrt(den)))
    nums = data.draw(st.lists(st.integers(0, den - 1), min_size=1, max_size=40))
    ell, d, beta = dirichlet_approx_batch(np.array(nums), den, d0)
    for i, a in enumerate(nums):
        r = dirichlet_approx(Fraction(a, den), d0)
        assert (ell[i], d[i]) == (r.ell, r.d)
        assert beta[i] == pytest.approx(r.beta, abs=1e-18)


@given(st.floats(0, 1, exclude_max=True), st.integers(1, 10**6))
def test_reconstruction(alpha, d0):
    assume(alpha == alpha)
    r = dirichlet_approx(alpha, d0)
    assert r.ell / r.d + r.beta == pytest.approx(alpha, abs=1e-15)
