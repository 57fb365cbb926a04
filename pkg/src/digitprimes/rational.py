"""Frequencies on R/Z, nearest-integer distance and Dirichlet approximation."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


def nearest_int_distance(x: float) -> float:
    """``||x||``, the distance from ``x`` to the nearest integer."""
    r = x - math.floor(x)
    return min(r, 1.0 - r)


def nearest_int_distance_array(x: np.ndarray) -> np.ndarray:
    r = np.mod(x, 1.0)
    return np.minimum(r, 1.0 - r)


_SPLIT = 2**26


@dataclass(frozen=True)
class Frequency:
    """A point ``num/den + offset`` of R/Z.

    The rational part is kept exact so that multiples ``b**i * theta`` can be
    reduced mod 1 in integer arithmetic; ``offset`` is a small real correction.
    """

    num: int
    den: int = 1
    offset: float = 0.0

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("Frequency denominator must be positive")
        object.__setattr__(self, "num", self.num % self.den)

    @classmethod
    def of(cls, value) -> "Frequency":
        if isinstance(value, Frequency):
            return value
        if isinstance(value, (int, Fraction)):
            f = Fraction(value)
            return cls(f.numerator, f.denominator)
        if isinstance(value, str):
            return cls.of(Fraction(value))
        return cls(0, 1, float(value))

    @property
    def rational(self) -> Fraction:
        return Fraction(self.num, self.den)

    @property
    def value(self) -> float:
        """Representative in [0, 1)."""
        v = (self.num / self.den + self.offset) % 1.0
        return 0.0 if v == 1.0 else v

    def exact(self) -> Fraction:
        """Exact value in [0, 1) (the float offset converted without rounding)."""
        return (self.rational + Fraction(self.offset)) % 1

    def phase(self, mult: int = 1, extra: Fraction | int = 0, centered: bool = False) -> float:
        """``mult * theta + extra`` reduced mod 1, exact before the final rounding.

        The float offset is taken at its exact binary value, so large ``mult``
        does not amplify rounding.  ``centered`` returns the representative in
        [-1/2, 1/2), which keeps full relative precision just below an integer.
        """
        rat = Fraction(self.num * mult, self.den) + extra
        if self.offset:
            rat += Fraction(self.offset) * mult
        rat %= 1
        if centered:
            return float(rat - 1 if rat >= Fraction(1, 2) else rat)
        v = float(rat)
        return 0.0 if v == 1.0 else v

    def phases(self, n: np.ndarray, extra: np.ndarray | None = None) -> np.ndarray:
        """Vectorised ``n * theta mod 1`` for integer arrays ``n``.

        The offset is split as ``H / 2**26 + lo``; ``n H mod 2**26`` is exact in
        int64 and ``n lo`` is tiny, so the phase error stays near one ulp.
        """
        n = np.asarray(n, dtype=np.int64)
        nmax = int(np.abs(n).max()) if n.size else 0
        if self.num == 0:
            rat = np.zeros(n.shape)
        elif nmax * self.den < 2**62:
            rat = ((n * self.num) % self.den) / self.den
        else:
            rat = np.array([(int(v) * self.num) % self.den for v in n.ravel()], dtype=np.float64).reshape(n.shape) / self.den
        out = rat
        if self.offset:
            head = round(self.offset * _SPLIT)
            lo = self.offset - head / _SPLIT
            if nmax * (abs(head) + 1) < 2**62:
                out = out + ((n * head) % _SPLIT) / _SPLIT + n * lo
            else:
                out = out + np.mod(n * self.offset, 1.0)
        if extra is not None:
            out = out + extra
        return np.mod(out, 1.0)

    def shifted(self, offset: float) -> "Frequency":
        return Frequency(self.num, self.den, self.offset + offset)

    def __neg__(self) -> "Frequency":
        return Frequency(-self.num, self.den, -self.offset)

    def __add__(self, other) -> "Frequency":
        other = Frequency.of(other)
        r = self.rational + other.rational
        return Frequency(r.numerator, r.denominator, self.offset + other.offset)

    def __str__(self) -> str:
        s = f"{self.num}/{self.den}"
        return s if not self.offset else f"{s}{self.offset:+.17g}"


@dataclass(frozen=True)
class RationalApprox:
    """``alpha = ell/d + beta`` with ``gcd(ell, d) = 1``, ``d <= d0``, ``|beta| < 1/(d d0)``."""

    ell: int
    d: int
    beta: float
    d0: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.ell, self.d)


def _convergents(x: Fraction, d0: int):
    """Continued-fraction convergents ``(p, q)`` of ``x`` with ``q <= d0``."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    num, den = x.numerator, x.denominator
    while den:
        a, r = divmod(num, den)
        p2, q2 = a * p1 + p0, a * q1 + q0
        if q2 > d0:
            return
        yield p2, q2
        p0, q0, p1, q1 = p1, q1, p2, q2
        num, den = den, r


def dirichlet_approx(alpha, d0: int) -> RationalApprox:
    """Dirichlet approximation of ``alpha`` (reduced to [0, 1)) with quality ``d0``.

    Returns the valid approximation with the smallest denominator: the least
    ``d`` with ``||d alpha|| < 1/d0``.  Record minima of ``||q alpha||`` occur
    only at convergent denominators, so it is the first convergent with
    ``|q alpha - p| < 1/d0``; one always exists with ``q <= d0``.
    """
    if d0 < 1:
        raise ValueError("d0 must be >= 1")
    x = Frequency.of(alpha).exact()
    p, q = 0, 1
    for p, q in _convergents(x, d0):
        if abs(q * x - p) * d0 < 1:
            break
    return RationalApprox(p, q, float(x - Fraction(p, q)), d0)


def dirichlet_approx_batch(nums: np.ndarray, den: int, d0: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised :func:`dirichlet_approx` for ``nums/den``; returns ``(ell, d, beta)``.

    The validity test ``|q num - p den| d0 < den`` and ``beta`` both use exact
    integers until the final division.
    """
    nums = np.asarray(nums, dtype=np.int64) % den
    if den * max(d0, 1) >= 2**62:
        raise OverflowError("denominator too large for the vectorised path")
    p0 = np.zeros_like(nums)
    q0 = np.ones_like(nums)
    p1 = np.ones_like(nums)
    q1 = np.zeros_like(nums)
    best_p = np.zeros_like(nums)
    best_q = np.ones_like(nums)
    num = nums.copy()
    dd = np.full_like(nums, den)
    active = np.ones(nums.shape, dtype=bool)
    while active.any():
        idx = np.flatnonzero(active)
        a, r = np.divmod(num[idx], dd[idx])
        p2 = a * p1[idx] + p0[idx]
        q2 = a * q1[idx] + q0[idx]
        ok = q2 <= d0
        good = idx[ok]
        best_p[good], best_q[good] = p2[ok], q2[ok]
        hit = ok & (np.abs(q2 * nums[idx] - p2 * den) * d0 < den)
        p0[idx], q0[idx] = p1[idx], q1[idx]
        p1[idx], q1[idx] = p2, q2
        num[idx], dd[idx] = dd[idx], r
        stop = ~ok | hit | (r == 0)
        active[idx[stop]] = False
    beta = (nums * best_q - best_p * den) / (best_q.astype(np.float64) * den)
    return best_p, best_q, beta
