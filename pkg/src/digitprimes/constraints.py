"""Digit constraints and base-b digit utilities.

Three kinds of constraint are supported:

* ``MISSING_DIGIT``: no base-b digit equals ``a0``.
* ``DIGIT_SUM_RESIDUE``: ``s_b(n) = a (mod m)``.  When ``alpha = j/m`` is set
  the constraint stands for the additive character ``n -> e(alpha s_b(n))``
  rather than the indicator of the residue class.
* ``PRESCRIBED_DIGITS``: digit ``i`` (0-based, the coefficient of ``b**i``)
  equals ``digits[i]`` for every ``i`` in the index set.  The empty index set
  is the always-true constraint.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import numpy as np

from .errors import ConstraintViolation


class Kind(enum.Enum):
    MISSING_DIGIT = "missing_digit"
    DIGIT_SUM_RESIDUE = "digit_sum_residue"
    PRESCRIBED_DIGITS = "prescribed_digits"


@dataclass(frozen=True)
class DigitConstraint:
    kind: Kind
    a0: int | None = None
    m: int | None = None
    a: int | None = None
    alpha: Fraction | None = None
    digits: Mapping[int, int] = field(default_factory=dict)

    @classmethod
    def missing_digit(cls, a0: int) -> "DigitConstraint":
        return cls(Kind.MISSING_DIGIT, a0=int(a0))

    @classmethod
    def digit_sum_residue(cls, m: int, a: int = 0, alpha=None) -> "DigitConstraint":
        alpha = None if alpha is None else Fraction(alpha)
        return cls(Kind.DIGIT_SUM_RESIDUE, m=int(m), a=int(a), alpha=alpha)

    @classmethod
    def character(cls, alpha) -> "DigitConstraint":
        """The character ``e(alpha s_b(n))`` for a rational ``alpha = j/m``."""
        alpha = Fraction(alpha) % 1
        return cls(Kind.DIGIT_SUM_RESIDUE, m=alpha.denominator, a=0, alpha=alpha)

    @classmethod
    def prescribed(cls, digits: Mapping[int, int]) -> "DigitConstraint":
        return cls(Kind.PRESCRIBED_DIGITS, digits=dict(sorted((int(i), int(e)) for i, e in digits.items())))

    @classmethod
    def always(cls) -> "DigitConstraint":
        return cls.prescribed({})

    @property
    def is_character(self) -> bool:
        return self.kind is Kind.DIGIT_SUM_RESIDUE and self.alpha is not None

    def __hash__(self):
        return hash((self.kind, self.a0, self.m, self.a, self.alpha, tuple(self.digits.items())))

    def validate(self, b: int, k: int | None = None) -> "DigitConstraint":
        if b < 2:
            raise ConstraintViolation(f"base b={b} must be >= 2")
        if k is not None and k < 1:
            raise ConstraintViolation(f"digit count k={k} must be >= 1")
        if self.kind is Kind.MISSING_DIGIT:
            if self.a0 is None or not 0 <= self.a0 < b:
                raise ConstraintViolation(f"missing digit a0={self.a0} is not a base-{b} digit")
        elif self.kind is Kind.DIGIT_SUM_RESIDUE:
            m = self.m
            if m is None or m < 1:
                raise ConstraintViolation(f"modulus m={m} must be a positive integer")
            if math.gcd(m, b - 1) != 1:
                raise ConstraintViolation(f"gcd(m={m}, b-1={b - 1}) != 1")
            if self.alpha is not None:
                if (self.alpha * m).denominator != 1 or not 0 <= self.alpha < 1:
                    raise ConstraintViolation(f"alpha={self.alpha} is not of the form j/{m} in [0, 1)")
            elif self.a is None or not 0 <= self.a < m:
                raise ConstraintViolation(f"residue a={self.a} must satisfy 0 <= a < m={m}")
        else:
            for i, e in self.digits.items():
                if i < 0 or (k is not None and i >= k):
                    raise ConstraintViolation(f"prescribed position {i} outside 0..{'k-1' if k is None else k - 1}")
                if not 0 <= e < b:
                    raise ConstraintViolation(f"prescribed digit {e} at position {i} is not a base-{b} digit")
        return self

    def digit_weights(self, b: int, i: int) -> np.ndarray:
        """Complex weights ``w(n_i)`` of the i-th digit factor (``n_i = 0..b-1``).

        For the character case the weight is ``e(alpha n_i)``; otherwise it is
        the 0/1 indicator of the digits allowed at position ``i``.  Residue
        indicators (``alpha`` unset) do not factor and have no digit weights.
        """
        if self.kind is Kind.MISSING_DIGIT:
            w = np.ones(b, dtype=complex)
            w[self.a0] = 0
            return w
        if self.kind is Kind.PRESCRIBED_DIGITS:
            if i in self.digits:
                w = np.zeros(b, dtype=complex)
                w[self.digits[i]] = 1
                return w
            return np.ones(b, dtype=complex)
        if self.alpha is None:
            raise ConstraintViolation("a digit-sum residue indicator has no per-digit factorisation")
        n = np.arange(b)
        return np.exp(2j * np.pi * ((n * self.alpha.numerator) % self.alpha.denominator) / self.alpha.denominator)

    def characters(self) -> list[tuple[complex, "DigitConstraint"]]:
        """Expand a residue indicator as ``sum_j coeff_j * e(j/m s_b(n))``."""
        if self.kind is not Kind.DIGIT_SUM_RESIDUE or self.alpha is not None:
            return [(1.0 + 0j, self)]
        m, a = self.m, self.a
        out = []
        for j in range(m):
            coeff = np.exp(-2j * np.pi * ((a * j) % m) / m) / m
            out.append((complex(coeff), DigitConstraint.digit_sum_residue(m, a, Fraction(j, m))))
        return out

    def holds(self, n: np.ndarray, b: int, k: int | None = None) -> np.ndarray:
        """Vectorised 0/1 indicator on integers ``n`` (all below ``b**k``)."""
        n = np.asarray(n, dtype=np.int64)
        if self.kind is Kind.MISSING_DIGIT:
            if k is None:
                k = digit_length(int(n.max()) if n.size else 0, b)
            ok = np.ones(n.shape, dtype=bool)
            rest = n.copy()
            for _ in range(k):
                ok &= rest % b != self.a0
                rest //= b
            return ok
        if self.kind is Kind.DIGIT_SUM_RESIDUE:
            if self.alpha is not None:
                raise ConstraintViolation("a character is complex-valued; use weights() instead of holds()")
            return digit_sums(n, b) % self.m == self.a
        ok = np.ones(n.shape, dtype=bool)
        for i, e in self.digits.items():
            ok &= (n // b**i) % b == e
        return ok

    def weights(self, n: np.ndarray, b: int, k: int | None = None) -> np.ndarray:
        """Complex values of the constraint function at ``n``."""
        if self.is_character:
            s = digit_sums(n, b)
            p, q = self.alpha.numerator, self.alpha.denominator
            return np.exp(2j * np.pi * ((s * p) % q) / q)
        return self.holds(n, b, k).astype(complex)

    def trivial_bound(self, b: int, k: int) -> float:
        if self.kind is Kind.MISSING_DIGIT:
            return float((b - 1) ** k)
        if self.kind is Kind.PRESCRIBED_DIGITS:
            return float(b ** (k - len(self.digits)))
        return float(b**k)

    def describe(self) -> dict:
        if self.kind is Kind.MISSING_DIGIT:
            return {"kind": self.kind.value, "a0": self.a0}
        if self.kind is Kind.DIGIT_SUM_RESIDUE:
            d = {"kind": self.kind.value, "m": self.m, "a": self.a}
            if self.alpha is not None:
                d["alpha"] = str(self.alpha)
            return d
        return {"kind": self.kind.value, "digits": {str(i): e for i, e in self.digits.items()}}


def digit_sum(n: int, b: int) -> int:
    if n < 0:
        raise ValueError("digit_sum needs n >= 0")
    s = 0
    while n:
        n, r = divmod(n, b)
        s += r
    return s


def digit_sums(n: np.ndarray, b: int) -> np.ndarray:
    rest = np.array(n, dtype=np.int64, copy=True)
    s = np.zeros_like(rest)
    while rest.any():
        s += rest % b
        rest //= b
    return s


def digit_length(n: int, b: int) -> int:
    k = 1
    while n >= b:
        n //= b
        k += 1
    return k
