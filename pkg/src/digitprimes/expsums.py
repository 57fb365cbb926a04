"""Exponential sums over primes and the equidistribution sum, with bound fits.

The right-hand sides are the bracketed bound expressions with implied
constant 1; :func:`fit_vinogradov_constants` estimates the constant as the
largest observed ratio lhs/rhs.
"""
from __future__ import annotations

import csv
import json
import math
import statistics
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ResourceError
from .fourier import SPECTRUM_LIMIT, radix_fft
from .primes import PrimeTable
from .rational import Frequency

TWO_PI_I = 2j * math.pi


@dataclass
class BoundFit:
    """Observed lhs/rhs ratios over a sample grid."""

    sample: list[dict]
    fitted_constant: float
    median_ratio: float
    extras: dict = field(default_factory=dict)

    @classmethod
    def from_rows(cls, rows: list[dict], **extras) -> "BoundFit":
        """Build a fit from rows carrying ``params``, ``lhs`` and ``rhs``.

        Rows with a non-finite or zero rhs, or flagged ``in_hypothesis=False``,
        are kept in the sample but excluded from the fitted values.
        """
        if not rows:
            raise ValueError("cannot fit an empty grid")
        ratios = []
        for row in rows:
            rhs = row["rhs"]
            if not math.isfinite(rhs) or rhs <= 0:
                warnings.warn(f"excluding row with rhs={rhs}: {row['params']}")
                row["ratio"] = math.nan
                continue
            row["ratio"] = row["lhs"] / rhs
            if row.get("in_hypothesis", True):
                ratios.append(row["ratio"])
        if not ratios:
            raise ValueError("no grid row is usable for a fit")
        return cls(rows, max(ratios), statistics.median(ratios), dict(extras))

    def ratios(self) -> list[float]:
        return [r["ratio"] for r in self.sample if math.isfinite(r["ratio"]) and r.get("in_hypothesis", True)]

    def summary(self) -> dict:
        return {
            "fitted_constant": self.fitted_constant,
            "median_ratio": self.median_ratio,
            "rows": len(self.sample),
            **self.extras,
        }

    def to_csv(self, path: str) -> None:
        keys = sorted({k for row in self.sample for k in row["params"]})
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow([*keys, "lhs", "rhs", "ratio"])
            for row in self.sample:
                w.writerow([*(row["params"].get(k, "") for k in keys), repr(row["lhs"]), repr(row["rhs"]), repr(row["ratio"])])

    def to_json(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.summary(), fh, indent=2, sort_keys=True, default=str)


def lambda_hat(theta, x: int, table: PrimeTable) -> complex:
    """``sum_{n < x} Lambda(n) e(n theta)`` by direct summation over prime powers."""
    if x > table.limit:
        raise ValueError(f"x={x} exceeds prime table limit {table.limit}")
    theta = Frequency.of(theta)
    n, lam = table.mangoldt_below(x)
    return complex(np.dot(lam, np.exp(TWO_PI_I * theta.phases(n))))


def lambda_hat_spectrum(b: int, k: int, table: PrimeTable) -> np.ndarray:
    """``Lambda-hat_{b^k}(a/b^k)`` for all ``0 <= a < b^k`` via a radix-b FFT."""
    n = b**k
    if n > SPECTRUM_LIMIT:
        raise ResourceError(f"b**k = {n} exceeds spectrum size {SPECTRUM_LIMIT}")
    if n > table.limit:
        raise ResourceError(f"b**k = {n} exceeds prime table limit {table.limit}")
    return radix_fft(table.mangoldt_dense(n), b, sign=1)


def equidistribution_sum(N: int, M: float, alpha) -> float:
    """``sum_{n=1}^N min(M, 1/||alpha n||)``; terms with ``||alpha n|| = 0`` give M."""
    if N < 1 or M < 1:
        raise ValueError("need N >= 1 and M >= 1")
    alpha = Frequency.of(alpha)
    total = 0.0
    for lo in range(1, N + 1, 2**20):
        n = np.arange(lo, min(lo + 2**20, N + 1), dtype=np.int64)
        r = alpha.phases(n)
        dist = np.minimum(r, 1.0 - r)
        # min(M, 1/dist) without dividing by zero
        total += float(np.sum(1.0 / np.maximum(dist, 1.0 / M)))
    return total


def lemma_rhs(which: int, **p) -> float:
    """Bound expression with constant 1.

    ``which=1``: ``(N + N M d|beta| + 1/(d|beta|) + d) log N`` (params N, M, d, beta);
    ``which=2``: ``(x^{4/5} + x^{1/2}/|d beta|^{1/2} + x |d beta|^{1/2}) (log x)^4``
    (params x, d, beta).  ``beta = 0`` gives ``inf``.
    """
    d, beta = p["d"], abs(p["beta"])
    if which == 1:
        N, M = p["N"], p["M"]
        inv = math.inf if beta == 0 else 1.0 / (d * beta)
        return (N + N * M * d * beta + inv + d) * math.log(N)
    if which == 2:
        x = p["x"]
        db = d * beta
        inv = math.inf if db == 0 else math.sqrt(x) / math.sqrt(db)
        return (x**0.8 + inv + x * math.sqrt(db)) * math.log(x) ** 4
    raise ValueError(f"unknown lemma {which!r}")


GRID_SIZES = (10**2, 10**3, 10**4, 10**5, 10**6)
GRID_DENOMINATORS = (1, 3, 10, 31, 100)
GRID_M = (10.0, 1000.0)


def _log_points(lo: float, hi: float, count: int) -> list[float]:
    if count == 1:
        return [lo]
    return [math.exp(math.log(lo) + (math.log(hi) - math.log(lo)) * j / (count - 1)) for j in range(count)]


def vinogradov_grid(which: int, density: int = 1, sizes=GRID_SIZES, denominators=GRID_DENOMINATORS) -> list[dict]:
    """Cartesian grid of ``(N, M, ell, d, beta)`` (``which=1``, equidistribution) or ``(x, ell, d, beta)``
    (``which=2``, prime sums).

    ``|beta| d^2`` runs log-uniformly over ``[1/size, 0.99]``; ``density``
    multiplies the number of beta values (100 points at density 1, 200 at 2).
    Every point has ``ell = 1`` (``0`` for ``d = 1``) and respects
    ``|beta| < 1/d^2``.
    """
    grid = []
    n_beta = (2 if which == 1 else 4) * density
    for size in sizes:
        for d in denominators:
            ell = 0 if d == 1 else 1
            for scaled in _log_points(1.0 / size, 0.99, n_beta):
                beta = scaled / d**2
                if which == 1:
                    for M in GRID_M:
                        grid.append({"lemma": 1, "N": size, "M": M, "ell": ell, "d": d, "beta": beta})
                else:
                    grid.append({"lemma": 2, "x": size, "ell": ell, "d": d, "beta": beta})
    return grid


def _in_hypothesis(pt: dict) -> bool:
    return math.gcd(pt["ell"], pt["d"]) == 1 and abs(pt["beta"]) < 1.0 / pt["d"] ** 2


def fit_vinogradov_constants(grid: Sequence[dict], table: PrimeTable | None = None) -> BoundFit:
    """Fit the implied constants of the equidistribution / prime-sum bounds.

    Points with ``lemma=1`` use :func:`equidistribution_sum`; ``lemma=2`` points use
    ``|lambda_hat(ell/d + beta, x)|`` and need a prime table.
    """
    if not grid:
        raise ValueError("empty grid")
    rows = []
    for pt in grid:
        alpha = Frequency(pt["ell"], pt["d"], pt["beta"])
        ok = _in_hypothesis(pt)
        if not ok:
            warnings.warn(f"grid point outside |beta| < 1/d^2 or gcd(ell, d) = 1: {pt}")
        if pt["lemma"] == 1:
            lhs = equidistribution_sum(pt["N"], pt["M"], alpha)
        else:
            if table is None:
                raise ValueError("lemma-2 grid points need a prime table")
            lhs = abs(lambda_hat(alpha, pt["x"], table))
        rhs = lemma_rhs(pt["lemma"], **pt)
        rows.append({"params": dict(pt), "lhs": lhs, "rhs": rhs, "in_hypothesis": ok})
    return BoundFit.from_rows(rows)
