"""Acceptance criteria, one test per criterion.

Each test tags itself with ``criterion`` so the terminal summary prints one
PASS/FAIL line per criterion.
"""
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from digitprimes.bounds import fit_l1_constants, l1_theta_samples, single_digit_inequalities, verify_l1, verify_linf
from digitprimes.circle import digit_sum_character_decomposition, estimate_count, inversion_identity_check
from digitprimes.constraints import DigitConstraint
from digitprimes.expsums import fit_vinogradov_constants, vinogradov_grid
from digitprimes.fourier import fourier_eval, naive_fourier_oracle
from digitprimes.primes import count_constrained_primes, sieve_primes
from digitprimes.rational import Frequency, dirichlet_approx

pytestmark = pytest.mark.acceptance


def _tag(record_property, num, title):
    record_property("criterion", (num, title))


def _random_constraint(rng, b, k):
    kind = rng.integers(3)
    if kind == 0:
        return DigitConstraint.missing_digit(int(rng.integers(b)))
    if kind == 1:
        ms = [m for m in range(1, 12) if math.gcd(m, b - 1) == 1]
        m = int(rng.choice(ms))
        return DigitConstraint.digit_sum_residue(m, int(rng.integers(m)))
    size = int(rng.integers(0, k + 1))
    pos = rng.choice(k, size=size, replace=False)
    return DigitConstraint.prescribed({int(i): int(rng.integers(b)) for i in pos})


def _random_theta(rng):
    if rng.random() < 0.5:
        den = int(rng.integers(1, 10**6))
        return Frequency(int(rng.integers(den)), den)
    return Frequency.of(float(rng.random()))


def test_criterion_01_product_formula(record_property):
    _tag(record_property, 1, "product formula matches direct summation, rel err <= 1e-9, < 10 s")
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    worst, cases = 0.0, 0
    kinds = ("missing", "residue", "prescribed")
    for b in (2, 3, 10):
        for k in range(1, 5):
            for kind in kinds:
                for _ in range(100):
                    c = _random_constraint(rng, b, k)
                    while c.kind.value[:4] != {"missing": "miss", "residue": "digi", "prescribed": "pres"}[kind]:
                        c = _random_constraint(rng, b, k)
                    theta = _random_theta(rng)
                    f = fourier_eval(c, theta, b, k)
                    o = naive_fourier_oracle(c, theta, b, k)
                    worst = max(worst, abs(f - o) / max(abs(o), 1.0))
                    cases += 1
    elapsed = time.perf_counter() - t0
    record_property("detail", f"{cases} evaluations, worst rel err {worst:.2e}, {elapsed:.1f} s")
    assert worst <= 1e-9
    assert elapsed < 10


def test_criterion_02_inversion_identity(record_property, table7):
    _tag(record_property, 2, "Fourier inversion identity rel err <= 1e-6 at b=10,k=4 and b=2,k=14, < 30 s")
    t0 = time.perf_counter()
    worst = 0.0
    runs = [
        (10, 4, DigitConstraint.missing_digit(7)),
        (10, 4, DigitConstraint.digit_sum_residue(2, 1)),
        (10, 4, DigitConstraint.prescribed({0: 3, 2: 1})),
        (2, 14, DigitConstraint.missing_digit(0)),
        (2, 14, DigitConstraint.digit_sum_residue(3, 2)),
        (2, 14, DigitConstraint.prescribed({0: 1, 13: 1})),
    ]
    for b, k, c in runs:
        _, _, rel = inversion_identity_check(c, b, k, table7)
        worst = max(worst, rel)
    elapsed = time.perf_counter() - t0
    record_property("detail", f"worst rel err {worst:.2e} over {len(runs)} constraints, {elapsed:.1f} s")
    assert worst <= 1e-6
    assert elapsed < 30


def test_criterion_03_character_decomposition(record_property, table7):
    _tag(record_property, 3, "digit-sum character decomposition equals weighted oracle, b=10,k=4,m in {2,7}")
    worst = 0.0
    for m in (2, 7):
        for a in range(m):
            dec = digit_sum_character_decomposition(10, 4, m, a, table7)
            oracle = count_constrained_primes(DigitConstraint.digit_sum_residue(m, a), 10, 4, weighted=True, table=table7)
            worst = max(worst, abs(dec.total - oracle) / max(abs(oracle), 1.0))
    record_property("detail", f"worst rel err {worst:.2e}")
    assert worst <= 1e-6


def test_criterion_04_missing_digit_weighted_ratio(record_property):
    _tag(record_property, 4, "b=10,a0=7,k=7 weighted oracle / (5/6) 9^7 in [0.90, 1.10], < 60 s with sieve")
    t0 = time.perf_counter()
    table = sieve_primes(10**7)
    est = estimate_count(DigitConstraint.missing_digit(7), 10, 7, table=table)
    elapsed = time.perf_counter() - t0
    record_property("detail", f"oracle {est.oracle:.6g}, prediction {est.prediction:.6g}, ratio {est.ratio:.6f}, {elapsed:.1f} s")
    assert est.prediction == pytest.approx(5 / 6 * 9**7, rel=1e-15)
    assert 0.90 <= est.ratio <= 1.10
    assert elapsed < 60


def test_criterion_05_digit_sum_parity(record_property, table7):
    _tag(record_property, 5, "|#even - #odd digit-sum primes below 10^7| <= 0.02 pi(10^7), pi(10^7) = 664579")
    pi = table7.pi(10**7 - 1)
    even = count_constrained_primes(DigitConstraint.digit_sum_residue(2, 0), 10, 7, table=table7)
    odd = count_constrained_primes(DigitConstraint.digit_sum_residue(2, 1), 10, 7, table=table7)
    record_property("detail", f"even {even}, odd {odd}, |diff| {abs(even - odd)} vs {0.02 * pi:.1f}")
    assert pi == 664579
    assert even + odd == pi
    assert abs(even - odd) <= 0.02 * pi


def test_criterion_06_character_linf_bound(record_property):
    _tag(record_property, 6, "character L-infinity bound, b=10, alpha=1/2, k=10, 10^4-point grid: zero violations")
    rep = verify_linf(10, 10, "character", alpha=Fraction(1, 2), grid=10_000)
    shifted = verify_linf(10, 10, "character", alpha=Fraction(1, 2), grid=10_000, shift=Fraction(1, 70_000))
    record_property(
        "detail",
        f"violations {len(rep.violations)} + {len(shifted.violations)} (shifted grid), bound {rep.details['bound']:.6g}",
    )
    assert rep.details["bound"] == pytest.approx(1e10 * math.exp(-0.000625), rel=1e-14)
    assert rep.ok and rep.checked == 10_000
    assert shifted.ok


def test_criterion_07_single_digit_inequalities(record_property):
    _tag(record_property, 7, "single-digit and chaining inequalities on 10^5-point grids, b in {2, 10}")
    counts = {}
    for b in (2, 10):
        rep = single_digit_inequalities(b, 100_000)
        counts[b] = rep.details["violation_counts"]
    record_property("detail", f"violation counts {counts}")
    for b in (2, 10):
        assert counts[b] == {k: 0 for k in counts[b]}, f"b={b}: {counts[b]}"


def test_criterion_08_dirichlet_contract(record_property):
    _tag(record_property, 8, "Dirichlet approximation: 10^4 random (alpha, D0<=10^6) satisfy d<=D0, |alpha-l/d| < 1/(d D0)")
    rng = np.random.default_rng(8)
    bad = 0
    for i in range(10_000):
        d0 = int(rng.integers(1, 10**6 + 1))
        if i % 2:
            den = int(rng.integers(1, 10**12))
            alpha = Fraction(int(rng.integers(den)), den)
        else:
            alpha = Fraction(float(rng.random()))
        r = dirichlet_approx(alpha, d0)
        ok = 1 <= r.d <= d0 and math.gcd(r.ell, r.d) == 1 and abs(alpha - Fraction(r.ell, r.d)) * r.d * d0 < 1
        bad += not ok
    record_property("detail", f"{bad} violations")
    assert bad == 0


def test_criterion_09_l1_shape(record_property):
    _tag(record_property, 9, "L1 constants C_k stable (max/min < 2) for b=10, k=2..5; LHS <= (C_max b log b)^k")
    fit = fit_l1_constants(10, ks=(2, 3, 4, 5), samples=16, seed=0)
    C = fit["C_max"]
    worst = 0.0
    for k in (2, 3, 4, 5):
        for seed in (0, 1):
            res = verify_l1(10, k, l1_theta_samples(10, k, 24, seed))
            worst = max(worst, res.extras["lhs_max"] / (C * 10 * math.log(10)) ** k)
    record_property("detail", f"C_k {[round(v, 4) for v in fit['C_k'].values()]}, spread {fit['spread']:.3f}, max lhs/rhs {worst:.6f}")
    assert fit["spread"] < 2
    assert worst <= 1 + 1e-12


def test_criterion_10_vinogradov_stability(record_property, table7):
    _tag(record_property, 10, "equidistribution / prime-sum bound fits change < 2x when the grid doubles; all ratios finite")
    out = {}
    for which in (1, 2):
        g1, g2 = vinogradov_grid(which, 1), vinogradov_grid(which, 2)
        assert len(g1) == 100 and len(g2) == 200
        f1 = fit_vinogradov_constants(g1, table7)
        f2 = fit_vinogradov_constants(g2, table7)
        ratios = f1.ratios() + f2.ratios()
        assert all(math.isfinite(r) for r in ratios)
        assert len(ratios) == 300
        out[which] = (f1.fitted_constant, f2.fitted_constant)
    record_property("detail", "; ".join(f"grid {w}: {a:.4g} -> {b:.4g}" for w, (a, b) in out.items()))
    for a, b in out.values():
        assert max(a, b) / min(a, b) < 2
