"""Circle-method assembly: arcs, major-arc main terms, minor-arc sums, estimators."""
from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .bounds import ExponentSet, delta_alpha, farey_pairs, fit_exponents
from .constraints import DigitConstraint, Kind
from .errors import ConstraintViolation, ResourceError, UnsupportedEstimatorError
from .expsums import lambda_hat_spectrum
from .fourier import ORACLE_LIMIT, full_spectrum
from .primes import PrimeTable, count_constrained_primes, euler_phi_moebius, load_or_sieve
from .rational import RationalApprox, dirichlet_approx_batch

ARC_LIMIT = 10**7


def default_d0(b: int, k: int) -> int:
    return b ** (k // 2)


@dataclass(frozen=True, eq=False)
class ArcDecomposition:
    """Dirichlet approximation ``a/b^k = ell/d + beta`` and major/minor label for every ``a``."""

    b: int
    k: int
    d0: int
    major_threshold: float
    ell: np.ndarray
    d: np.ndarray
    beta: np.ndarray
    major: np.ndarray

    @property
    def major_count(self) -> int:
        return int(np.count_nonzero(self.major))

    @property
    def minor_count(self) -> int:
        return int(self.major.size - self.major_count)

    def label(self, a: int) -> str:
        return "major" if self.major[a] else "minor"

    def approx(self, a: int) -> RationalApprox:
        return RationalApprox(int(self.ell[a]), int(self.d[a]), float(self.beta[a]), self.d0)

    def write_csv(self, path: str) -> None:
        import csv

        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["a", "ell", "d", "beta", "label"])
            for a in range(self.major.size):
                w.writerow([a, int(self.ell[a]), int(self.d[a]), repr(float(self.beta[a])), self.label(a)])


def classify_arcs(b: int, k: int, threshold: float, d0: int | None = None, chunk: int = 2**20) -> ArcDecomposition:
    """Label ``a`` major iff ``max(d, b^k |beta|) < threshold``."""
    N = b**k
    if N > ARC_LIMIT:
        raise ResourceError(f"b**k = {N} exceeds arc classification size {ARC_LIMIT}")
    d0 = default_d0(b, k) if d0 is None else d0
    if threshold < 1:
        raise ValueError("threshold must be >= 1")
    if d0 < 1 or d0 * d0 > N:
        raise ValueError(f"d0={d0} must satisfy 1 <= d0 <= b^(k/2)")
    ells, ds, betas = [], [], []
    for lo in range(0, N, chunk):
        e, d, beta = dirichlet_approx_batch(np.arange(lo, min(lo + chunk, N)), N, d0)
        ells.append(e)
        ds.append(d)
        betas.append(beta)
    ell, d, beta = np.concatenate(ells), np.concatenate(ds), np.concatenate(betas)
    a = np.arange(N, dtype=np.int64)
    # b^k |beta| = |a d - ell b^k| / d, kept exact in integers
    scaled = np.abs(a * d - ell * N) / d
    major = np.maximum(d, scaled) < threshold
    return ArcDecomposition(b, k, d0, float(threshold), ell, d, beta, major)


def kappa(b: int, a0: int) -> Fraction:
    """Major-arc density constant for primes missing the digit ``a0``."""
    if not 0 <= a0 < b:
        raise ConstraintViolation(f"a0={a0} is not a base-{b} digit")
    if math.gcd(a0, b) != 1:
        return Fraction(b, b - 1)
    phi, _ = euler_phi_moebius(b)
    return Fraction(b * (phi - 1), (b - 1) * phi)


@dataclass(frozen=True)
class MainTermData:
    kappa: Fraction | None
    main_term: float
    delta: float | None = None
    c_b: float | None = None
    ap_form: Fraction | None = None
    exact_main_term: Fraction | None = None


def _count_in_class(constraint: DigitConstraint, b: int, k: int, residue: int) -> int:
    """``#{m < b^k : m = residue (mod b), constraint(m)}`` by enumeration."""
    N = b**k
    total = 0
    for lo in range(residue, N, b * 2**20):
        m = np.arange(lo, min(lo + b * 2**20, N), b, dtype=np.int64)
        total += int(np.count_nonzero(constraint.holds(m, b, k)))
    return total


def major_arc_main_term(b: int, k: int, a0: int, A: float = 8.0, table: PrimeTable | None = None) -> MainTermData:
    """``kappa_b(a0) (b-1)^k`` and its arithmetic-progression form.

    The AP form ``(b/phi(b)) sum_{(a, b) = 1} #{m < b^k : m = a (b), m in B}``
    counts each residue class by enumeration when ``b^k`` is at most the
    oracle size; both values are exact rationals and must coincide.
    """
    if table is not None and b**k > table.limit:
        raise ResourceError(f"b**k = {b ** k} exceeds prime table limit {table.limit}")
    kap = kappa(b, a0)
    exact = kap * (b - 1) ** k
    phi, _ = euler_phi_moebius(b)
    constraint = DigitConstraint.missing_digit(a0).validate(b, k)
    count = 0
    for a in range(1, b):
        if math.gcd(a, b) != 1:
            continue
        if b**k <= ORACLE_LIMIT:
            count += _count_in_class(constraint, b, k, a)
        else:
            count += 0 if a == a0 else (b - 1) ** (k - 1)
    ap = Fraction(b, phi) * count
    return MainTermData(kappa=kap, main_term=float(exact), ap_form=ap, exact_main_term=exact)


def _spectra(constraint: DigitConstraint, b: int, k: int, table: PrimeTable, lambda_spectrum=None):
    N = b**k
    if N > ORACLE_LIMIT:
        raise ResourceError(f"b**k = {N} exceeds spectrum oracle size {ORACLE_LIMIT}")
    lam = lambda_spectrum if lambda_spectrum is not None else lambda_hat_spectrum(b, k, table)
    return full_spectrum(constraint, b, k), lam


def inversion_identity_check(constraint: DigitConstraint, b: int, k: int, table: PrimeTable, lambda_spectrum=None):
    """``sum_{n<b^k} Lambda(n) f(n)`` directly and as ``(1/b^k) sum_a F(a/b^k) Lambda-hat(-a/b^k)``.

    Returns ``(lhs, rhs, rel_err)`` with ``rel_err = |lhs - rhs| / max(|lhs|, 1)``.
    """
    constraint.validate(b, k)
    N = b**k
    spec, lam = _spectra(constraint, b, k, table, lambda_spectrum)
    rhs = complex(np.sum(spec * np.conj(lam)) / N)
    lhs = count_constrained_primes(constraint, b, k, weighted=True, table=table)
    if not constraint.is_character:
        rhs = rhs.real
    rel = abs(lhs - rhs) / max(abs(lhs), 1.0)
    return lhs, rhs, rel


class CharacterDecomposition(NamedTuple):
    main: float
    character_terms: list[complex]
    total: float


def digit_sum_character_decomposition(b: int, k: int, m: int, a: int, table: PrimeTable, lambda_spectrum=None) -> CharacterDecomposition:
    """Split ``sum_{n<b^k, s_b(n) = a (m)} Lambda(n)`` into ``psi/m`` plus one term per character ``j/m``.

    Each character term is ``e(-a j/m)/(m b^k) sum_a g-hat(a/b^k) Lambda-hat(-a/b^k)``;
    the terms for ``j`` and ``m - j`` are conjugate so ``total`` is real.
    """
    DigitConstraint.digit_sum_residue(m, a).validate(b, k)
    N = b**k
    lam = lambda_spectrum if lambda_spectrum is not None else lambda_hat_spectrum(b, k, table)
    _, mang = table.mangoldt_below(N)
    main = float(mang.sum()) / m
    terms = []
    for j in range(1, m):
        g = full_spectrum(DigitConstraint.character(Fraction(j, m)), b, k)
        coeff = np.exp(-2j * np.pi * ((a * j) % m) / m) / (m * N)
        terms.append(complex(coeff * np.sum(g * np.conj(lam))))
    total = main + sum(t.real for t in terms)
    return CharacterDecomposition(main, terms, total)


def minor_arc_rhs(character: bool, small_eta: bool, b: int, k: int, D: float, B: float, d0: float, exps: ExponentSet) -> float:
    """Minor-arc bound expressions with constant 1."""
    N = float(b) ** k
    e = exps.beta_b if character else exps.alpha_b
    scale = N * N if character else (b - 1.0) ** k * N
    if small_eta:
        return scale * (k**4 / D ** (0.2 - e) + k**4 * d0 ** (0.5 + 2 * e) / N**0.5)
    return scale * (k**4 / (D * B) ** (0.2 - e) + k**4 * N**e / d0**0.5)


def minor_arc_sums(spec: np.ndarray, lam: np.ndarray, b: int, k: int, D: int, B: float):
    """Sums of ``|F(a/b^k) Lambda-hat(-a/b^k)|`` over ``a = b^k ell/d + eta`` with ``d ~ D``.

    Returns ``(sum over B <= |eta| < 2B, sum over |eta| <= 1, term counts)``.
    For ``d = 1`` the fraction ``0/1`` is included.
    """
    N = b**k
    prod = np.abs(spec) * np.abs(lam)
    big = small = 0.0
    n_big = n_small = 0
    for ell, d in farey_pairs(D, include_zero=(D == 1)):
        lo = (N * ell) // d - 2 * int(math.ceil(B)) - 2
        hi = (N * ell) // d + 2 * int(math.ceil(B)) + 2
        a = np.arange(lo, hi + 1, dtype=np.int64)
        eta_d = np.abs(a * d - N * ell)
        in_big = (eta_d >= B * d) & (eta_d < 2 * B * d)
        in_small = eta_d <= d
        big += float(prod[a[in_big] % N].sum())
        small += float(prod[a[in_small] % N].sum())
        n_big += int(in_big.sum())
        n_small += int(in_small.sum())
    return big, small, (n_big, n_small)


def minor_arc_report(
    constraint: DigitConstraint,
    b: int,
    k: int,
    D: int,
    B: float,
    d0: int | None = None,
    table: PrimeTable | None = None,
    exponents: ExponentSet | None = None,
    lambda_spectrum=None,
) -> dict:
    """Exact minor-arc sums vs the bound expressions for ``|eta| ~ B`` and ``|eta| <= 1``."""
    constraint.validate(b, k)
    if not (constraint.kind is Kind.MISSING_DIGIT or constraint.is_character):
        raise ConstraintViolation("minor-arc report needs a missing-digit or character constraint")
    N = b**k
    d0 = default_d0(b, k) if d0 is None else d0
    problems = []
    if not 1 <= B <= N / (d0 * D):
        problems.append(f"B={B} outside 1 <= B <= b^k/(d0 D) = {N / (d0 * D):.6g}")
    if not 1 <= D <= d0 <= math.isqrt(N):
        problems.append(f"need 1 <= D={D} <= d0={d0} <= b^(k/2)")
    for p in problems:
        warnings.warn(p)
    table = table or load_or_sieve(N)
    exps = exponents or fit_exponents(b, alpha=constraint.alpha)
    spec, lam = _spectra(constraint, b, k, table, lambda_spectrum)
    big, small, (n_big, n_small) = minor_arc_sums(spec, lam, b, k, D, B)
    character = constraint.is_character
    rhs_big = minor_arc_rhs(character, False, b, k, D, B, d0, exps)
    rhs_small = minor_arc_rhs(character, True, b, k, D, B, d0, exps)
    psi = table.psi(N - 1)
    trivial = constraint.trivial_bound(b, k) * psi
    return {
        "constraint": constraint.describe(),
        "b": b,
        "k": k,
        "D": D,
        "B": B,
        "d0": d0,
        "exponents": exps.as_dict(),
        "eta_B": {"lhs": big, "rhs": rhs_big, "ratio": big / rhs_big, "terms": n_big, "trivial": n_big * trivial},
        "eta_1": {"lhs": small, "rhs": rhs_small, "ratio": small / rhs_small, "terms": n_small, "trivial": n_small * trivial},
        "warnings": problems,
    }


@dataclass
class EstimateConfig:
    weighted: bool = True
    A: float = 8.0
    threshold: float | None = None
    d0: int | None = None
    exponents: ExponentSet | None = None
    budget_constant: float = 1.0
    with_oracle: bool = True
    with_arcs: bool = True


@dataclass
class Estimate:
    constraint: DigitConstraint
    b: int
    k: int
    weighted: bool
    prediction: float
    error_budget: float
    oracle: float | None
    ratio: float | None
    main: MainTermData
    threshold: float
    d0: int
    exponents: ExponentSet
    arcs: dict | None = None
    timings: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_report(self) -> dict:
        return {
            "constraint": self.constraint.describe(),
            "b": self.b,
            "k": self.k,
            "weighted": self.weighted,
            "prediction": self.prediction,
            "error_budget": self.error_budget,
            "oracle": self.oracle,
            "ratio": self.ratio,
            "realized_error": None if self.oracle is None else self.oracle - self.prediction,
            "main_term": {
                "kappa": None if self.main.kappa is None else str(self.main.kappa),
                "value": self.main.main_term,
                "delta": self.main.delta,
            },
            "threshold": self.threshold,
            "d0": self.d0,
            "exponents": self.exponents.as_dict(),
            "arcs": self.arcs,
            "timings": self.timings,
            "notes": self.notes,
        }


def _error_budget_missing(b: int, k: int, A: float, d0: int, e: float) -> float:
    logN = k * math.log(b)
    N = float(b) ** k
    return (b - 1.0) ** k * (
        logN**-A + k**4 * logN ** (-A * (0.2 - e)) + k**5 * N**e / d0**0.5 + k**5 * d0 ** (0.5 + 2 * e) / N**0.5
    )


def _error_budget_residue(b: int, k: int, delta: float, d0: int, e: float) -> float:
    N = float(b) ** k
    return (
        N / N ** (delta / 4)
        + k**4 * N / N ** (delta * (0.2 - e) / 4)
        + N * k**4 * d0 ** (0.5 + 2 * e) / N**0.5
        + k**4 * N ** (1 + e) / d0**0.5
    )


def estimate_count(
    constraint: DigitConstraint,
    b: int,
    k: int,
    config: EstimateConfig | None = None,
    table: PrimeTable | None = None,
) -> Estimate:
    """Main-term prediction, error budget and (when feasible) brute-force oracle.

    Weighted predictions estimate ``sum Lambda(n) 1(n)``; unweighted ones
    divide by ``k log b`` as a first-order partial-summation surrogate.
    """
    config = config or EstimateConfig()
    constraint.validate(b, k)
    if constraint.kind is Kind.PRESCRIBED_DIGITS:
        raise UnsupportedEstimatorError("no circle-method estimator for prescribed digits; use the counting oracle")
    if constraint.is_character:
        raise UnsupportedEstimatorError("estimate a residue class, not a single character")
    timings: dict[str, float] = {}
    notes: list[str] = []
    N = b**k
    d0 = config.d0 or default_d0(b, k)
    logN = k * math.log(b)

    t = time.perf_counter()
    if table is None and config.with_oracle and N <= 2**34:
        table = load_or_sieve(N)
    timings["sieve"] = time.perf_counter() - t

    t = time.perf_counter()
    if constraint.kind is Kind.MISSING_DIGIT:
        main = major_arc_main_term(b, k, constraint.a0, config.A)
        exps = config.exponents or fit_exponents(b)
        threshold = config.threshold or logN**config.A
        budget = config.budget_constant * _error_budget_missing(b, k, config.A, d0, exps.alpha_b)
    else:
        m = constraint.m
        delta = min(delta_alpha(Fraction(j, m), b) for j in range(1, m)) if m > 1 else 0.0
        if table is not None and N <= table.limit:
            base = table.psi(N - 1)
            notes.append("main term psi(b^k)/m from the sieve")
        else:
            base = float(N)
            notes.append("main term b^k/m")
        main = MainTermData(kappa=None, main_term=base / m, delta=delta)
        exps = config.exponents or fit_exponents(b, alpha=Fraction(1, m))
        threshold = config.threshold or max(1.0, N ** (delta / 4))
        budget = 0.0 if m == 1 else config.budget_constant * _error_budget_residue(b, k, delta, d0, exps.beta_b)
    timings["main_term"] = time.perf_counter() - t

    prediction = main.main_term
    if not config.weighted:
        prediction /= logN
        budget /= logN

    oracle = ratio = None
    if config.with_oracle and table is not None and N <= table.limit:
        t = time.perf_counter()
        oracle = float(count_constrained_primes(constraint, b, k, weighted=config.weighted, table=table))
        ratio = oracle / prediction if prediction else None
        timings["oracle"] = time.perf_counter() - t

    arcs = None
    if config.with_arcs and N <= ARC_LIMIT:
        t = time.perf_counter()
        dec = classify_arcs(b, k, max(threshold, 1.0), d0)
        arcs = {"major_count": dec.major_count, "minor_count": dec.minor_count}
        timings["arcs"] = time.perf_counter() - t

    return Estimate(constraint, b, k, config.weighted, prediction, budget, oracle, ratio, main, threshold, d0, exps, arcs, timings, notes)
