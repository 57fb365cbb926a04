import math
import os

import numpy as np
import pytest
from hypothesis import given, strategies as st

from digitprimes.constraints import DigitConstraint, digit_sum, digit_sums
from digitprimes.errors import ConstraintViolation, ResourceError
from digitprimes.primes import (
    CACHE_ENV,
    count_constrained_primes,
    euler_phi_moebius,
    factorize,
    load_or_sieve,
    load_table,
    save_table,
    sieve_primes,
    trial_division_is_prime,
)


def test_small_tables():
    t = sieve_primes(10)
    assert t.primes.tolist() == [2, 3, 5, 7]
    assert t.Lambda(8) == pytest.approx(math.log(2))
    assert t.Lambda(9) == pytest.approx(math.log(3))
    assert t.Lambda(6) == 0 and t.Lambda(1) == 0
    assert len(sieve_primes(100)) == 25


def test_pi_1e7(table7):
    assert table7.pi(10**7 - 1) == 664579


def test_1e7_sample_against_trial_division(table7):
    rng = np.random.default_rng(3)
    for n in rng.integers(2, 10**7, 300):
        assert table7.is_prime(int(n)) == trial_division_is_prime(int(n))


@given(st.integers(2, 3000))
def test_sieve_matches_trial_division(limit):
    expected = [n for n in range(2, limit) if trial_division_is_prime(n)]
    assert sieve_primes(limit).primes.tolist() == expected


@pytest.mark.parametrize("segment", [1, 7, 64])
def test_segment_boundaries(segment):
    ref = sieve_primes(5000).primes
    assert np.array_equal(sieve_primes(5000, segment_odds=segment).primes, ref)


def test_workers_agree():
    assert np.array_equal(sieve_primes(300_001, workers=4, segment_odds=2**10).primes, sieve_primes(300_001).primes)


def test_psi_and_mangoldt():
    t = sieve_primes(1000)
    psi = sum(math.log(p) for p in t.primes.tolist() for j in range(1, 8) if p**j <= 100)
    assert t.psi(100) == pytest.approx(psi, rel=1e-14)
    n, lam = t.mangoldt_below(10)
    assert n.tolist() == [2, 3, 4, 5, 7, 8, 9]
    dense = t.mangoldt_dense(10)
    assert dense[8] == pytest.approx(math.log(2)) and dense[6] == 0


def test_resource_bounds():
    with pytest.raises(ResourceError, match="2\\*\\*34"):
        sieve_primes(2**34 + 1)
    with pytest.raises(ResourceError):
        sieve_primes(1)


def test_query_outside_table():
    with pytest.raises(ValueError):
        sieve_primes(100).pi(100)


def test_cache_roundtrip(tmp_path, monkeypatch):
    t = sieve_primes(50_000)
    path = tmp_path / "x.dgpr"
    save_table(t, str(path))
    assert np.array_equal(load_table(str(path)).primes, t.primes)
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "cache"))
    a = load_or_sieve(50_000)
    assert os.path.exists(tmp_path / "cache" / "primes_50000.dgpr")
    b = load_or_sieve(20_000)  # truncated from the larger cached table
    assert np.array_equal(b.primes, a.primes[a.primes < 20_000])
    assert b.limit == 20_000


def test_cache_bad_magic(tmp_path):
    p = tmp_path / "bad.dgpr"
    p.write_bytes(b"NOPE" + bytes(20))
    with pytest.raises(ValueError, match="not a prime-table"):
        load_table(str(p))


@pytest.mark.parametrize("n,phi,mu", [(1, 1, 1), (10, 4, 1), (12, 4, 0), (30, 8, -1), (97, 96, -1)])
def test_phi_mu(n, phi, mu):
    assert euler_phi_moebius(n) == (phi, mu)


@given(st.integers(1, 10**9))
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.items()) == n
    assert all(trial_division_is_prime(p) for p in f)


def test_count_examples(table_small):
    assert count_constrained_primes(DigitConstraint.missing_digit(7), 10, 2, table=table_small) == 16
    assert count_constrained_primes(DigitConstraint.digit_sum_residue(2, 0), 10, 2, table=table_small) == 13
    assert count_constrained_primes(DigitConstraint.prescribed({0: 1}), 10, 1, table=table_small) == 0
    w = count_constrained_primes(DigitConstraint.always(), 10, 4, weighted=True, table=table_small)
    assert w == pytest.approx(table_small.psi(9999), rel=1e-13)


def test_count_character_is_complex(table_small):
    v = count_constrained_primes(DigitConstraint.character("1/2"), 10, 3, weighted=True, table=table_small)
    assert isinstance(v, complex)
    even = count_constrained_primes(DigitConstraint.digit_sum_residue(2, 0), 10, 3, weighted=True, table=table_small)
    odd = count_constrained_primes(DigitConstraint.digit_sum_residue(2, 1), 10, 3, weighted=True, table=table_small)
    assert v.real == pytest.approx(even - odd, rel=1e-12)


def test_count_beyond_table(table_small):
    with pytest.raises(ResourceError):
        count_constrained_primes(DigitConstraint.missing_digit(1), 10, 5, table=table_small)


@pytest.mark.parametrize(
    "c,b,k",
    [
        (DigitConstraint.missing_digit(10), 10, 2),
        (DigitConstraint.digit_sum_residue(3, 0), 10, 2),
        (DigitConstraint.digit_sum_residue(2, 2), 10, 2),
        (DigitConstraint.prescribed({3: 1}), 10, 2),
        (DigitConstraint.prescribed({0: 5}), 3, 2),
        (DigitConstraint.missing_digit(0), 10, 0),
        (DigitConstraint.character("1/3"), 10, 2),
    ],
)
def test_invalid_constraints(c, b, k):
    with pytest.raises(ConstraintViolation):
        c.validate(b, k)


@pytest.mark.parametrize("n,b,s", [(999, 10, 27), (5, 2, 2), (9973, 10, 28), (0, 7, 0)])
def test_digit_sum_examples(n, b, s):
    assert digit_sum(n, b) == s


@given(st.integers(2, 36), st.lists(st.integers(0, 2**40), min_size=1, max_size=20))
def test_digit_sums_vectorised_and_congruence(b, ns):
    sums = digit_sums(np.array(ns), b)
    assert sums.tolist() == [digit_sum(n, b) for n in ns]
    if b > 2:
        assert all((s - n) % (b - 1) == 0 for s, n in zip(sums.tolist(), ns))
