"""Fourier transforms of digit-constraint functions.

``F(theta) = sum_{n < b^k} f(n) e(n theta)`` factors over digits as
``prod_i F_i(b^i theta)`` with ``F_i(t) = sum_{c < b} w_i(c) e(c t)``.
Each factor is evaluated in closed form (geometric ratio) away from its
removable singularity and by direct b-term summation near it.

Accuracy: double precision, roughly ``k * b * 2**-50`` relative per value.
"""
from __future__ import annotations

import csv
import math

import numpy as np

from .constraints import DigitConstraint, Kind
from .errors import ComputationError, ResourceError
from .rational import Frequency

ORACLE_LIMIT = 10**7
SPECTRUM_LIMIT = 10**8
# below this distance to an integer a factor is summed directly
SINGULAR_EPS = 1e-6

TWO_PI_I = 2j * math.pi


def _e(t: float) -> complex:
    return complex(math.cos(2 * math.pi * t), math.sin(2 * math.pi * t))


def _geometric_factor(num_phase: float, den_phase: float) -> complex:
    """``(e(num) - 1) / (e(den) - 1)`` via ``e(t) - 1 = 2i sin(pi t) e(t/2)``."""
    return math.sin(math.pi * num_phase) / math.sin(math.pi * den_phase) * _e((num_phase - den_phase) / 2)


def _direct_factor(weights: np.ndarray, t: float) -> complex:
    c = np.arange(weights.size)
    return complex(np.dot(weights, np.exp(TWO_PI_I * np.mod(c * t, 1.0))))


def _near_int(t: float) -> bool:
    """``t`` is a centered phase in [-1/2, 1/2)."""
    return abs(t) < SINGULAR_EPS


def _factor(constraint: DigitConstraint, theta: Frequency, b: int, i: int) -> complex:
    t = theta.phase(b**i, centered=True)
    if constraint.kind is Kind.MISSING_DIGIT:
        if _near_int(t):
            return _direct_factor(constraint.digit_weights(b, i), t)
        t_next = theta.phase(b ** (i + 1), centered=True)
        return _geometric_factor(t_next, t) - _e(theta.phase(b**i * constraint.a0))
    if constraint.kind is Kind.PRESCRIBED_DIGITS:
        if i in constraint.digits:
            return _e(theta.phase(b**i * constraint.digits[i]))
        if _near_int(t):
            return _direct_factor(constraint.digit_weights(b, i), t)
        return _geometric_factor(theta.phase(b ** (i + 1), centered=True), t)
    alpha = constraint.alpha
    u = theta.phase(b**i, alpha, centered=True)
    if _near_int(u):
        return _direct_factor(constraint.digit_weights(b, i), t)
    return _geometric_factor(theta.phase(b ** (i + 1), b * alpha, centered=True), u)


def fourier_eval(constraint: DigitConstraint, theta, b: int, k: int) -> complex:
    """Product-formula value of ``sum_{n < b^k} f(n) e(n theta)``."""
    constraint.validate(b, k)
    theta = Frequency.of(theta)
    if constraint.kind is Kind.DIGIT_SUM_RESIDUE and constraint.alpha is None:
        return sum(c * fourier_eval(ch, theta, b, k) for c, ch in constraint.characters())
    out = 1.0 + 0j
    for i in range(k):
        out *= _factor(constraint, theta, b, i)
    if not (math.isfinite(out.real) and math.isfinite(out.imag)):
        raise ComputationError(f"non-finite transform value at theta={theta}")
    return out


def fourier_derivative_eval(constraint: DigitConstraint, theta, b: int, k: int) -> complex:
    """``d/dtheta`` of :func:`fourier_eval` by the product rule over digit factors."""
    constraint.validate(b, k)
    theta = Frequency.of(theta)
    if constraint.kind is Kind.DIGIT_SUM_RESIDUE and constraint.alpha is None:
        return sum(c * fourier_derivative_eval(ch, theta, b, k) for c, ch in constraint.characters())
    c = np.arange(b)
    factors, derivs = [], []
    for i in range(k):
        w = constraint.digit_weights(b, i)
        t = theta.phase(b**i)
        ph = np.exp(TWO_PI_I * np.mod(c * t, 1.0))
        factors.append(complex(np.dot(w, ph)))
        derivs.append(TWO_PI_I * b**i * complex(np.dot(w * c, ph)))
    total = 0j
    for j in range(k):
        prod = derivs[j]
        for i in range(k):
            if i != j:
                prod *= factors[i]
        total += prod
    return total


def _check_oracle_scale(b: int, k: int, limit: int = ORACLE_LIMIT) -> int:
    n = b**k
    if n > limit:
        raise ResourceError(f"b**k = {n} exceeds the supported size {limit}")
    return n


def naive_fourier_oracle(constraint: DigitConstraint, theta, b: int, k: int, chunk: int = 2**20) -> complex:
    """Direct ``O(b^k)`` summation of ``f(n) e(n theta)``."""
    constraint.validate(b, k)
    theta = Frequency.of(theta)
    n_max = _check_oracle_scale(b, k)
    total = 0j
    for lo in range(0, n_max, chunk):
        n = np.arange(lo, min(lo + chunk, n_max), dtype=np.int64)
        total += complex(np.sum(constraint.weights(n, b, k) * np.exp(TWO_PI_I * theta.phases(n))))
    return total


def full_spectrum(constraint: DigitConstraint, b: int, k: int, shift=None) -> np.ndarray:
    """All values ``F(shift + a/b^k)`` for ``0 <= a < b^k``.

    Digit factor ``i`` depends on ``a`` only through ``a mod b^(k-i)``, so each
    level is a length-``b^(k-i)`` sparse transform broadcast over the rest.
    """
    constraint.validate(b, k)
    n = _check_oracle_scale(b, k, SPECTRUM_LIMIT)
    if constraint.kind is Kind.DIGIT_SUM_RESIDUE and constraint.alpha is None:
        out = np.zeros(n, dtype=complex)
        for c, ch in constraint.characters():
            out += c * full_spectrum(ch, b, k, shift)
        return out
    shift = Frequency(0) if shift is None else Frequency.of(shift)
    out = np.ones(n, dtype=complex)
    digits = np.arange(b, dtype=np.int64)
    for i in range(k):
        m = b ** (k - i)
        roots = np.exp(TWO_PI_I * np.arange(m) / m)
        w = constraint.digit_weights(b, i) * np.exp(TWO_PI_I * np.mod(digits * shift.phase(b**i), 1.0))
        r = np.arange(m, dtype=np.int64)
        level = np.zeros(m, dtype=complex)
        for c in np.flatnonzero(w):
            level += w[c] * roots[(c * r) % m]
        out.reshape(b**i, m)[:] *= level
    return out


def radix_fft(x: np.ndarray, b: int, sign: int = 1) -> np.ndarray:
    """Radix-``b`` decimation-in-time DFT along the last axis (length ``b**k``).

    Returns ``X[..., a] = sum_n x[..., n] exp(sign * 2 pi i n a / N)``.
    """
    x = np.asarray(x, dtype=complex)
    n = x.shape[-1]
    if n == 1:
        return x.copy()
    if n % b:
        raise ValueError(f"length {n} is not a power of {b}")
    m = n // b
    lead = x.shape[:-1]
    sub = np.swapaxes(x.reshape(*lead, m, b), -1, -2)
    y = radix_fft(np.ascontiguousarray(sub), b, sign)
    rq = np.outer(np.arange(b), np.arange(m)) % n
    tw = np.exp(sign * TWO_PI_I * rq / n)
    butterfly = np.exp(sign * TWO_PI_I * (np.outer(np.arange(b), np.arange(b)) % b) / b)
    out = np.einsum("sr,...rq->...sq", butterfly, y * tw)
    return out.reshape(*lead, n)


def factor_moduli(constraint: DigitConstraint, theta, b: int, k: int) -> list[float]:
    """``|F_i(b^i theta)|`` for each digit position."""
    theta = Frequency.of(theta)
    return [abs(_factor(constraint, theta, b, i)) for i in range(k)]


def write_spectrum_csv(values: np.ndarray, path: str) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["a", "re", "im", "modulus"])
        for a, v in enumerate(values):
            w.writerow([a, repr(float(v.real)), repr(float(v.imag)), repr(float(abs(v)))])


__all__ = [
    "fourier_eval",
    "fourier_derivative_eval",
    "naive_fourier_oracle",
    "full_spectrum",
    "radix_fft",
    "factor_moduli",
    "write_spectrum_csv",
]
