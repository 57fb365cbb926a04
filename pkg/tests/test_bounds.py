import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from digitprimes.bounds import (
    ExponentSet,
    delta_alpha,
    empirical_c_b,
    farey_pairs,
    fit_exponents,
    fit_l1_constants,
    hybrid_sum,
    l1_theta_samples,
    single_digit_inequalities,
    verify_hybrid,
    verify_l1,
    verify_large_sieve,
    verify_linf,
)
from digitprimes.constraints import DigitConstraint
from digitprimes.errors import HypothesisError, ResourceError
from digitprimes.fourier import fourier_eval, full_spectrum
from digitprimes.rational import Frequency


def test_l1_k1_direct():
    fit = verify_l1(10, 1, l1_theta_samples(10, 1, 10))
    c = DigitConstraint.missing_digit(7)
    direct = sum(abs(sum(np.exp(2j * np.pi * n * a / 10) for n in range(10) if n != 7)) for a in range(10))
    assert fit.sample[0]["lhs"] == pytest.approx(direct, rel=1e-12)
    assert fit.sample[0]["lhs"] == pytest.approx(sum(abs(fourier_eval(c, Frequency(a, 10), 10, 1)) for a in range(10)))


def test_l1_preconditions():
    with pytest.raises(ValueError):
        verify_l1(10, 0, l1_theta_samples(10, 1, 10))
    with pytest.raises(ValueError):
        verify_l1(10, 2, l1_theta_samples(10, 2, 9))
    with pytest.raises(ValueError):
        verify_l1(10, 2, [Frequency(1, 3)] * 12)


def test_l1_constants_stable_in_k():
    fit = fit_l1_constants(10, ks=(2, 3, 4))
    assert fit["spread"] < 2
    assert fit["C_max"] == max(fit["C_k"].values())


def test_exponent_definitions():
    e = ExponentSet.from_constant(10, 1.0, alpha=Fraction(1, 2))
    assert e.alpha_b == pytest.approx(math.log(10 / 9 * math.log(10)) / math.log(10))
    assert e.beta_b == pytest.approx(math.log(math.log(10)) / math.log(10))
    assert e.delta == pytest.approx(0.25 / (4 * 10**4))


@given(st.integers(2, 50), st.fractions(0, 1))
def test_delta_range(b, alpha):
    d = delta_alpha(alpha, b)
    assert 0 <= d <= 1 / (16 * b**4) + 1e-30


def test_exponents_decrease_with_base():
    exps = [fit_exponents(b, ks=(2,)) for b in (10, 50, 100, 256)]
    for e in exps:
        assert e.alpha_b > e.beta_b > 0
    for lo, hi in zip(exps, exps[1:]):
        assert hi.alpha_b < lo.alpha_b and hi.beta_b < lo.beta_b


def test_large_sieve_examples():
    assert verify_large_sieve(10, 3, 1, C=1.0).sample[0]["lhs"] == 0
    fit = verify_large_sieve(10, 3, 2, C=1.0)
    assert fit.extras["pairs"] == 3
    c = DigitConstraint.missing_digit(7)
    at_centres = sum(abs(fourier_eval(c, Frequency(ell, d), 10, 3)) for ell, d in [(1, 2), (1, 3), (2, 3)])
    assert at_centres <= fit.extras["lhs_grid"] * (1 + 1e-12)
    assert fit.extras["lhs_grid"] <= fit.sample[0]["lhs"]
    with pytest.raises(HypothesisError):
        verify_large_sieve(10, 2, 40)


def test_large_sieve_ratio_decreases_with_base():
    ratios = [verify_large_sieve(b, 3, 2).fitted_constant for b in (10, 20, 50)]
    assert ratios[0] > ratios[1] > ratios[2]


def test_large_sieve_grid_overshoot_below_two():
    fit = verify_large_sieve(10, 4, 3, C=1.0, constraint=DigitConstraint.digit_sum_residue(7, 2))
    assert fit.extras["eps_points"] >= 32
    assert 1 <= fit.extras["overshoot"] < 2
    with pytest.raises(ResourceError):
        verify_large_sieve(10, 6, 1, C=1.0, max_points=1000)


def test_farey_pairs():
    assert list(farey_pairs(2)) == [(1, 2), (1, 3), (2, 3)]
    assert list(farey_pairs(1, include_zero=True)) == [(0, 1)]


def test_hybrid_large_B_reduces_to_l1():
    s = full_spectrum(DigitConstraint.missing_digit(7), 10, 3)
    # |eta| < b^k with d = 1 covers every residue twice except 0
    assert hybrid_sum(s, 10, 3, 1, 1000) == pytest.approx(2 * np.abs(s).sum() - abs(s[0]), rel=1e-12)


def test_hybrid_exponent_example():
    fit = verify_hybrid(10, 5, 3, 100)
    assert fit.extras["realized_exponent"] <= fit.extras["exponents"]["alpha_b"] + 0.1
    assert fit.extras["dominant"] in ("power", "linear")


def test_hybrid_character_uses_beta():
    fit = verify_hybrid(10, 4, 2, 10, alpha=Fraction(1, 2))
    assert fit.extras["exponent_used"] == fit.extras["exponents"]["beta_b"]
    assert fit.sample[0]["params"]["character"] is True


def test_linf_rational_example():
    rep = verify_linf(10, 6, "rational", d=3, ell=1, eps=0.0)
    assert rep.ok and rep.details["c_b"] > 0
    assert rep.details["modulus"] < 9**6


@pytest.mark.parametrize(
    "params,msg",
    [
        ({"d": 2}, "divides"),
        ({"d": 200}, "b\\^\\(k/3\\)"),
        ({"d": 3, "eps": 0.01}, "eps"),
        ({"d": 9, "ell": 3}, "gcd"),
    ],
)
def test_linf_rational_hypotheses(params, msg):
    with pytest.raises(HypothesisError, match=msg):
        verify_linf(10, 6, "rational", **params)


def test_empirical_c_b_positive():
    pairs = [(ell, d) for d in (3, 7, 9, 11, 13, 21) for ell in range(1, d) if math.gcd(ell, d) == 1]
    assert empirical_c_b(10, 9, pairs) > 0


def test_linf_character_trivial_alpha():
    rep = verify_linf(10, 4, "character", alpha=Fraction(0), grid=500)
    assert rep.ok and rep.details["bound"] == 10**4 and rep.details["delta"] == 0


@given(
    st.sampled_from([3, 4, 5, 8, 10]),
    st.integers(1, 7),
    st.integers(1, 12),
    st.floats(0, 1, exclude_max=True),
)
def test_character_bound_pointwise(b, k, m, theta):
    if math.gcd(m, b - 1) != 1:
        m = 1
    for j in range(m):
        alpha = Fraction(j, m)
        v = abs(fourier_eval(DigitConstraint.character(alpha), theta, b, k))
        dist = min(float((b - 1) * alpha % 1), 1 - float((b - 1) * alpha % 1))
        assert v <= b**k * math.exp(-k * dist**2 / (4 * b**3)) * (1 + 1e-12)


def test_single_digit_b10():
    rep = single_digit_inequalities(10, 100_000)
    assert rep.ok, rep.details


def test_single_digit_small_bases_missing_digit_gap():
    # the missing-digit step pairs two consecutive allowed digits; with b = 2 only
    # one digit survives, and with b = 3, a0 = 1 the survivors 0, 2 are not adjacent
    for b in (2, 3):
        counts = single_digit_inequalities(b, 1000).details["violation_counts"]
        assert counts["missing_digit"] > 0
        assert counts["pair"] == counts["full_digit"] == counts["chain"] == 0
    assert single_digit_inequalities(4, 1000).ok


def test_single_digit_grid_precondition():
    with pytest.raises(ValueError):
        single_digit_inequalities(10, 999)
