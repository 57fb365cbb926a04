"""Numerical checks of the L1, large-sieve, hybrid and L-infinity digit bounds.

Left-hand sides are computed exactly (up to float rounding) from the product
formula; right-hand sides use empirically fitted constants, always reported
next to the fit that produced them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constraints import DigitConstraint, Kind
from .errors import HypothesisError, ResourceError
from .expsums import BoundFit
from .fourier import fourier_eval, full_spectrum
from .primes import factorize
from .rational import Frequency, nearest_int_distance

# floating-point allowance for inequalities that are tight (equality at theta = 0)
ROUND_SLACK = 8 * np.finfo(float).eps


def delta_alpha(alpha, b: int) -> float:
    """``||(b-1) alpha||^2 / (4 b^4)``."""
    x = float((Fraction(alpha) * (b - 1)) % 1)
    return min(x, 1 - x) ** 2 / (4 * b**4)


@dataclass(frozen=True)
class ExponentSet:
    """Hybrid-bound exponents derived from a fitted L1 constant ``C_fit``."""

    b: int
    alpha_b: float
    beta_b: float
    c_b: float | None
    delta: float | None
    C_fit: float

    @classmethod
    def from_constant(cls, b: int, C: float, alpha=None, c_b: float | None = None) -> "ExponentSet":
        lb = math.log(b)
        return cls(
            b=b,
            alpha_b=math.log(C * b / (b - 1) * lb) / lb,
            beta_b=math.log(C * lb) / lb,
            c_b=c_b,
            delta=None if alpha is None else delta_alpha(alpha, b),
            C_fit=C,
        )

    def as_dict(self) -> dict:
        return {"b": self.b, "alpha_b": self.alpha_b, "beta_b": self.beta_b, "c_b": self.c_b, "delta": self.delta, "C_fit": self.C_fit}


def default_missing_digit(b: int) -> DigitConstraint:
    return DigitConstraint.missing_digit(min(7, b - 1))


def _l1_sum(constraint: DigitConstraint, b: int, k: int, theta) -> float:
    return float(np.sum(np.abs(full_spectrum(constraint, b, k, shift=theta))))


def verify_l1(b: int, k: int, theta_samples, constraint: DigitConstraint | None = None) -> BoundFit:
    """``sup_theta sum_a |F(theta + a/b^k)|`` against ``(b log b)^k``.

    ``extras['C_k'] = (max lhs)^(1/k) / (b log b)``.
    """
    if k < 1:
        raise ValueError("verify_l1 needs k >= 1")
    thetas = [Frequency.of(t) for t in theta_samples]
    if len(thetas) < 10 or not any(t.value == 0 for t in thetas):
        raise ValueError("need at least 10 theta samples including theta = 0")
    constraint = (constraint or default_missing_digit(b)).validate(b, k)
    rhs = (b * math.log(b)) ** k
    rows = [{"params": {"b": b, "k": k, "theta": str(t)}, "lhs": _l1_sum(constraint, b, k, t), "rhs": rhs} for t in thetas]
    fit = BoundFit.from_rows(rows)
    lhs_max = max(r["lhs"] for r in rows)
    fit.extras.update({"b": b, "k": k, "C_k": lhs_max ** (1 / k) / (b * math.log(b)), "lhs_max": lhs_max})
    return fit


def l1_theta_samples(b: int, k: int, count: int = 16, seed: int = 0) -> list[Frequency]:
    """theta = 0, the half-step 1/(2 b^k), and random offsets in [0, 1/b^k)."""
    rng = np.random.default_rng(seed)
    out = [Frequency(0), Frequency(1, 2 * b**k)]
    out += [Frequency(0, 1, float(u) / b**k) for u in rng.random(count - 2)]
    return out


def fit_l1_constants(b: int, ks=(2, 3, 4, 5), samples: int = 16, seed: int = 0, constraint=None) -> dict:
    """Run :func:`verify_l1` over ``ks``; returns ``{"C_k": {k: C_k}, "C_max": ..., "spread": max/min}``."""
    cks = {}
    for k in ks:
        fit = verify_l1(b, k, l1_theta_samples(b, k, samples, seed), constraint)
        cks[k] = fit.extras["C_k"]
    vals = list(cks.values())
    return {"b": b, "C_k": cks, "C_max": max(vals), "spread": max(vals) / min(vals)}


def fit_exponents(b: int, ks=(2, 3), samples: int = 16, seed: int = 0, alpha=None) -> ExponentSet:
    return ExponentSet.from_constant(b, fit_l1_constants(b, ks, samples, seed)["C_max"], alpha=alpha)


def farey_pairs(D: int, include_zero: bool = False):
    """``(ell, d)`` with ``D <= d < 2D`` and ``gcd(ell, d) = 1``; ``0 < ell < d`` unless ``include_zero``."""
    for d in range(D, 2 * D):
        for ell in range(0 if include_zero else 1, d):
            if math.gcd(ell, d) == 1:
                yield ell, d


def _shifted_values(constraint: DigitConstraint, base: Frequency, eps: np.ndarray, b: int, k: int):
    """``F(base + eps)`` and ``F'(base + eps)`` on an array of small shifts."""
    if constraint.kind is Kind.DIGIT_SUM_RESIDUE and constraint.alpha is None:
        F = np.zeros(eps.shape, dtype=complex)
        dF = np.zeros(eps.shape, dtype=complex)
        for coeff, ch in constraint.characters():
            f, df = _shifted_values(ch, base, eps, b, k)
            F += coeff * f
            dF += coeff * df
        return F, dF
    factors, derivs = [], []
    for i in range(k):
        w = constraint.digit_weights(b, i)
        t = base.phase(b**i, centered=True) + b**i * eps
        f = np.zeros(eps.shape, dtype=complex)
        df = np.zeros(eps.shape, dtype=complex)
        for c in np.flatnonzero(w):
            ph = w[c] * np.exp(2j * np.pi * np.mod(c * t, 1.0))
            f += ph
            df += c * ph
        factors.append(f)
        derivs.append(2j * np.pi * b**i * df)
    # prefix/suffix products keep the product rule free of divisions
    prefix = [np.ones(eps.shape, dtype=complex)]
    for f in factors:
        prefix.append(prefix[-1] * f)
    suffix = np.ones(eps.shape, dtype=complex)
    dF = np.zeros(eps.shape, dtype=complex)
    for j in range(k - 1, -1, -1):
        dF += prefix[j] * derivs[j] * suffix
        suffix = suffix * factors[j]
    return prefix[-1], dF


def large_sieve_grid_size(b: int, k: int, D: int, eps_points: int = 32) -> int:
    """Grid size with spacing at most ``1/(4 b^k)``.

    ``F`` is a trigonometric polynomial of degree below ``b^k``, so Bernstein's
    inequality gives ``|F'| <= 2 pi b^k sup|F|``; at this spacing the
    derivative correction adds at most ``pi/4`` of the sup.
    """
    radius = 1.0 / (10 * D * D)
    return max(eps_points, math.ceil(8 * b**k * radius))


def verify_large_sieve(
    b: int,
    k: int,
    D: int,
    theta=0,
    C: float | None = None,
    constraint: DigitConstraint | None = None,
    eps_points: int = 32,
    max_points: int = 2**22,
) -> BoundFit:
    """Large-sieve sum with ``sup_{|eps| < 1/(10 D^2)}`` estimated from an eps grid.

    The sup on each grid cell is bounded by the grid maximum plus
    ``(h/2) max|F'|`` (h = grid spacing).  ``eps_points`` is a minimum: the
    grid is refined until the correction cannot exceed the true sup, so the
    corrected lhs overshoots by a factor below 2.  Both the raw grid sum and
    the corrected sum are reported, the corrected one is the lhs.
    """
    N = b**k
    if D < 1 or D * D > 10 * N:
        raise HypothesisError(f"D={D} outside 1 <= D, D^2 <= 10 b^k")
    constraint = (constraint or default_missing_digit(b)).validate(b, k)
    theta = Frequency.of(theta)
    if C is None:
        C = fit_l1_constants(b, ks=(k,))["C_max"]
    radius = 1.0 / (10 * D * D)
    n_eps = large_sieve_grid_size(b, k, D, eps_points)
    if n_eps > max_points:
        raise ResourceError(f"eps grid of {n_eps} points exceeds {max_points}")
    # symmetric grid through eps = 0, right endpoint dropped: n_eps values
    eps = np.linspace(-radius, radius, n_eps + 1)[:-1]
    h = 2 * radius / n_eps
    lhs_grid = lhs = 0.0
    pairs = 0
    for ell, d in farey_pairs(D):
        F, dF = _shifted_values(constraint, Frequency(ell, d) + theta, eps, b, k)
        top = float(np.abs(F).max())
        lhs_grid += top
        lhs += top + h / 2 * float(np.abs(dF).max())
        pairs += 1
    rhs = (D * D + N) * (C * math.log(b)) ** k
    row = {"params": {"b": b, "k": k, "D": D, "theta": str(theta), "C": C}, "lhs": lhs, "rhs": rhs}
    fit = BoundFit.from_rows([row])
    overshoot = lhs / lhs_grid if lhs_grid > 0 else 1.0
    fit.extras.update({"lhs_grid": lhs_grid, "pairs": pairs, "C": C, "eps_points": n_eps, "overshoot": overshoot})
    return fit


def hybrid_sum(spectrum: np.ndarray, b: int, k: int, D: int, B: float) -> float:
    """``sum_{d ~ D} sum_{ell < d, (ell, d) = 1} sum_{|eta| < B} |F(ell/d + eta/b^k)|`` from a full spectrum."""
    N = b**k
    mags = np.abs(spectrum)
    total = 0.0
    for ell, d in farey_pairs(D, include_zero=True):
        lo = math.floor((N * ell - B * d) / d) - 1
        hi = math.ceil((N * ell + B * d) / d) + 1
        a = np.arange(lo, hi + 1, dtype=np.int64)
        keep = np.abs(a * d - N * ell) < B * d
        total += float(mags[a[keep] % N].sum())
    return total


def verify_hybrid(
    b: int,
    k: int,
    D: int,
    B: float,
    C: float | None = None,
    constraint: DigitConstraint | None = None,
    alpha=None,
) -> BoundFit:
    """Hybrid (d, ell, eta) sum against ``T^e (D^2 B)^{exp} + D^2 B (C log b)^k``.

    ``T^e`` is ``(b-1)^k`` with exponent ``alpha_b`` for the missing-digit
    transform and ``b^k`` with ``beta_b`` for the character transform.  The
    realised exponent of ``D^2 B`` is the slope between ``B`` and ``2B``.
    """
    constraint = (constraint or (DigitConstraint.character(alpha) if alpha is not None else default_missing_digit(b))).validate(b, k)
    character = constraint.is_character
    if D < 1 or B < 1:
        raise HypothesisError("need D >= 1 and B >= 1")
    if C is None:
        C = fit_l1_constants(b, ks=(min(k, 3),))["C_max"]
    exps = ExponentSet.from_constant(b, C, alpha=constraint.alpha if character else None)
    spec = full_spectrum(constraint, b, k)
    lhs1 = hybrid_sum(spec, b, k, D, B)
    lhs2 = hybrid_sum(spec, b, k, D, 2 * B)
    expo = exps.beta_b if character else exps.alpha_b
    trivial = float(b**k if character else (b - 1) ** k)
    rows = []
    for BB, lhs in ((B, lhs1), (2 * B, lhs2)):
        t1 = trivial * (D * D * BB) ** expo
        t2 = D * D * BB * (C * math.log(b)) ** k
        rows.append({"params": {"b": b, "k": k, "D": D, "B": BB, "character": character}, "lhs": lhs, "rhs": t1 + t2, "terms": (t1, t2)})
    fit = BoundFit.from_rows(rows)
    slope = math.log(lhs2 / lhs1) / math.log(2) if lhs1 > 0 and lhs2 > 0 else math.nan
    t1, t2 = rows[0]["terms"]
    fit.extras.update(
        {
            "exponents": exps.as_dict(),
            "exponent_used": expo,
            "dominant": "power" if t1 >= t2 else "linear",
            "realized_exponent": slope,
        }
    )
    return fit


@dataclass
class CheckReport:
    """Outcome of a hard (pass/fail) inequality check."""

    name: str
    ok: bool
    checked: int
    violations: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "lemma": self.name,
            "ok": self.ok,
            "checked": self.checked,
            "violations": self.violations[:20],
            "violation_count": len(self.violations),
            **self.details,
        }


def _has_prime_factor_not_dividing(d: int, b: int) -> bool:
    return any(b % p for p in factorize(d))


def verify_linf(b: int, k: int, variant: str, **params) -> CheckReport:
    """L-infinity checks.

    ``variant="rational"`` (params ``d, ell, eps, a0``): empirical
    ``c_b = -log(|F|/(b-1)^k) log(d) / k`` at ``ell/d + eps``; must be positive.
    ``variant="character"`` (params ``alpha, grid, shift``): on
    ``theta = j/grid + shift``, ``|g-hat(theta)| <= b^k exp(-k ||(b-1) alpha||^2 / (4 b^3))``.
    With ``grid`` a power of ``b`` and ``b^k theta`` integral the transform
    vanishes identically; a shift such as ``1/(7 grid)`` gives a sharper test.
    """
    if variant == "rational":
        d, ell = int(params["d"]), int(params.get("ell", 1))
        eps = float(params.get("eps", 0.0))
        a0 = int(params.get("a0", min(7, b - 1)))
        if not d < b ** (k / 3):
            raise HypothesisError(f"d={d} must satisfy d < b^(k/3) = {b ** (k / 3):.6g}")
        if not _has_prime_factor_not_dividing(d, b):
            raise HypothesisError(f"every prime factor of d={d} divides b={b}")
        if not abs(eps) < 1 / (2 * b ** (2 * k / 3)):
            raise HypothesisError(f"|eps|={abs(eps)} must be < 1/(2 b^(2k/3))")
        if math.gcd(ell, d) != 1:
            raise HypothesisError(f"gcd(ell={ell}, d={d}) != 1")
        value = abs(fourier_eval(DigitConstraint.missing_digit(a0), Frequency(ell, d, eps), b, k))
        trivial = float((b - 1) ** k)
        c_emp = -math.log(value / trivial) * math.log(d) / k if value > 0 else math.inf
        ok = c_emp > 0
        return CheckReport(
            "linf_rational",
            ok,
            1,
            [] if ok else [{"d": d, "ell": ell, "eps": eps, "c_b": c_emp}],
            {"b": b, "k": k, "d": d, "ell": ell, "eps": eps, "a0": a0, "modulus": value, "trivial": trivial, "c_b": c_emp},
        )
    if variant == "character":
        alpha = Fraction(params["alpha"])
        grid = int(params.get("grid", 10_000))
        shift = Frequency.of(params.get("shift", 0))
        constraint = DigitConstraint.character(alpha)
        dist = nearest_int_distance(float((b - 1) * alpha))
        bound = b**k * math.exp(-k * dist**2 / (4 * b**3))
        violations, worst = [], 0.0
        for j in range(grid):
            v = abs(fourier_eval(constraint, Frequency(j, grid) + shift, b, k))
            worst = max(worst, v / bound)
            if v > bound * (1 + ROUND_SLACK):
                violations.append({"theta": f"{j}/{grid}", "modulus": v, "bound": bound})
        return CheckReport(
            "linf_character",
            not violations,
            grid,
            violations,
            {"b": b, "k": k, "alpha": str(alpha), "shift": str(shift), "bound": bound, "max_ratio": worst, "delta": delta_alpha(alpha, b)},
        )
    raise ValueError(f"unknown L-infinity variant {variant!r}")


def empirical_c_b(b: int, k: int, pairs, a0: int | None = None) -> float:
    """Smallest empirical ``c_b`` over ``(ell, d)`` pairs meeting the rational-variant hypotheses."""
    vals = []
    for ell, d in pairs:
        kw = {"d": d, "ell": ell} if a0 is None else {"d": d, "ell": ell, "a0": a0}
        vals.append(verify_linf(b, k, "rational", **kw).details["c_b"])
    return min(vals)


def single_digit_inequalities(b: int, grid_size: int = 100_000) -> CheckReport:
    """Check the single-digit exponential inequalities on ``theta = j/grid_size``.

    * pair: ``2 + 2 cos(2 pi theta) <= 4 exp(-2 ||theta||^2)``
    * missing_digit: ``|sum_{n<b, n != a0} e(n theta)| <= (b-1) exp(-||theta||^2/b)`` for every ``a0``
    * full_digit: ``|sum_{n<b} e(n theta)| <= b exp(-||theta||^2/b)``
    * chain: ``||u + alpha|| + ||b u + alpha|| >= ||(b-1) alpha|| / b`` on a
      ``sqrt(grid_size)``-square (u, alpha) grid
    """
    if grid_size < 1000:
        raise ValueError("grid_size must be >= 1000")
    theta = np.arange(grid_size) / grid_size
    dist = np.minimum(theta, 1 - theta)
    counts: dict[str, int] = {}
    violations = []

    lhs = 2 + 2 * np.cos(2 * np.pi * theta)
    rhs = 4 * np.exp(-2 * dist**2)
    bad = np.flatnonzero(lhs > rhs * (1 + ROUND_SLACK))
    counts["pair"] = int(bad.size)
    violations += [{"inequality": "pair", "theta": f"{j}/{grid_size}"} for j in bad[:10]]

    digits = np.arange(b)
    ph = np.exp(2j * np.pi * np.mod(np.outer(theta, digits), 1.0))
    full = ph.sum(axis=1)
    bad = np.flatnonzero(np.abs(full) > b * np.exp(-(dist**2) / b) * (1 + ROUND_SLACK))
    counts["full_digit"] = int(bad.size)
    violations += [{"inequality": "full_digit", "theta": f"{j}/{grid_size}"} for j in bad[:10]]

    missing_bad = 0
    for a0 in range(b):
        vals = np.abs(full - ph[:, a0])
        bad = np.flatnonzero(vals > (b - 1) * np.exp(-(dist**2) / b) * (1 + ROUND_SLACK))
        missing_bad += int(bad.size)
        violations += [{"inequality": "missing_digit", "a0": a0, "theta": f"{j}/{grid_size}"} for j in bad[:3]]
    counts["missing_digit"] = missing_bad

    side = math.isqrt(grid_size - 1) + 1
    u = np.arange(side)[:, None] / side
    al = np.arange(side)[None, :] / side

    def near(x):
        r = np.mod(x, 1.0)
        return np.minimum(r, 1 - r)

    lhs = near(u + al) + near(b * u + al)
    rhs = near((b - 1) * al) / b
    bad = np.argwhere(lhs < rhs - 1e-12)
    counts["chain"] = int(bad.shape[0])
    violations += [{"inequality": "chain", "u": f"{i}/{side}", "alpha": f"{j}/{side}"} for i, j in bad[:10]]

    checked = grid_size * (2 + b) + side * side
    return CheckReport("single_digit", not violations, checked, violations, {"b": b, "grid_size": grid_size, "violation_counts": counts})


__all__ = [
    "ExponentSet",
    "CheckReport",
    "delta_alpha",
    "verify_l1",
    "fit_l1_constants",
    "fit_exponents",
    "verify_large_sieve",
    "verify_hybrid",
    "hybrid_sum",
    "verify_linf",
    "empirical_c_b",
    "single_digit_inequalities",
    "l1_theta_samples",
    "farey_pairs",
]
