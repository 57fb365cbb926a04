"""Segmented prime sieve, von Mangoldt tables and small arithmetic functions."""
from __future__ import annotations

import glob
import math
import os
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .constraints import DigitConstraint
from .errors import ResourceError

MAX_LIMIT = 2**34
# odd numbers per segment: 2**18 one-byte flags = 256 KiB
SEGMENT_ODDS = 2**18

CACHE_MAGIC = b"DGPR1"
CACHE_ENV = "DIGITPRIMES_CACHE"


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """Primes and von Mangoldt values below ``limit`` (exclusive).

    ``prime_powers`` is ascending and ``mangoldt[i] = log p`` for
    ``prime_powers[i] = p**j``.  Prefix sums of Lambda are computed on demand.
    """

    limit: int
    primes: np.ndarray
    prime_powers: np.ndarray
    mangoldt: np.ndarray

    @classmethod
    def from_primes(cls, limit: int, primes: np.ndarray) -> "PrimeTable":
        primes = np.asarray(primes, dtype=np.int64)
        pows = [primes]
        logs = [np.log(primes.astype(np.float64))]
        small = primes[primes.astype(np.float64) ** 2 < limit]
        power = small * small
        base = small
        while power.size:
            keep = power < limit
            power, base = power[keep], base[keep]
            pows.append(power)
            logs.append(np.log(base.astype(np.float64)))
            # avoid int64 overflow: only multiply while the next power can fit below limit
            ok = power <= (limit - 1) // base
            power, base = power[ok] * base[ok], base[ok]
        pp = np.concatenate(pows)
        lg = np.concatenate(logs)
        order = np.argsort(pp, kind="stable")
        pp, lg = pp[order], lg[order]
        for arr in (primes, pp, lg):
            arr.setflags(write=False)
        return cls(int(limit), primes, pp, lg)

    def __len__(self) -> int:
        return int(self.primes.size)

    def pi(self, x: int) -> int:
        """Number of primes ``<= x``."""
        self._check(x)
        return int(np.searchsorted(self.primes, x, side="right"))

    def is_prime(self, n: int) -> bool:
        self._check(n)
        i = np.searchsorted(self.primes, n)
        return bool(i < self.primes.size and self.primes[i] == n)

    def Lambda(self, n: int) -> float:
        self._check(n)
        i = np.searchsorted(self.prime_powers, n)
        if i < self.prime_powers.size and self.prime_powers[i] == n:
            return float(self.mangoldt[i])
        return 0.0

    def psi_prefix(self) -> np.ndarray:
        """Cumulative sums of Lambda aligned with ``prime_powers``."""
        return np.cumsum(self.mangoldt)

    def psi(self, x: int) -> float:
        """Chebyshev ``psi(x) = sum_{n <= x} Lambda(n)``."""
        self._check(x)
        i = int(np.searchsorted(self.prime_powers, x, side="right"))
        return float(np.sum(self.mangoldt[:i])) if i else 0.0

    def mangoldt_below(self, x: int) -> tuple[np.ndarray, np.ndarray]:
        """Prime powers ``n < x`` and their Lambda values."""
        if x > self.limit:
            raise ValueError(f"x={x} exceeds table limit {self.limit}")
        i = int(np.searchsorted(self.prime_powers, x))
        return self.prime_powers[:i], self.mangoldt[:i]

    def mangoldt_dense(self, x: int) -> np.ndarray:
        """Length-``x`` array with ``Lambda(n)`` at index ``n``."""
        n, lam = self.mangoldt_below(x)
        out = np.zeros(x, dtype=np.float64)
        out[n] = lam
        return out

    def _check(self, x: int) -> None:
        if x >= self.limit:
            raise ValueError(f"query {x} outside table (limit {self.limit})")


def _small_primes(n: int) -> np.ndarray:
    """Plain sieve for primes <= n."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    flags[4::2] = False
    for p in range(3, math.isqrt(n) + 1, 2):
        if flags[p]:
            flags[p * p :: 2 * p] = False
    return np.flatnonzero(flags).astype(np.int64)


def _sieve_segment(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Odd primes in [lo, hi); lo odd; base holds the odd primes <= sqrt(hi)."""
    count = (hi - lo + 1) // 2
    flags = np.ones(count, dtype=bool)
    for p in base:
        p = int(p)
        p2 = p * p
        if p2 >= hi:
            break
        start = max(p2, -(-lo // p) * p)
        if start % 2 == 0:
            start += p
        if start < hi:
            flags[(start - lo) // 2 :: p] = False
    if lo == 1:
        flags[0] = False
    return lo + 2 * np.flatnonzero(flags).astype(np.int64)


def sieve_primes(limit: int, workers: int = 1, segment_odds: int = SEGMENT_ODDS) -> PrimeTable:
    """All primes below ``limit`` via an odd-only segmented sieve."""
    if not 2 <= limit <= MAX_LIMIT:
        raise ResourceError(f"sieve limit {limit} outside supported range [2, 2**34]")
    base = _small_primes(math.isqrt(limit - 1) + 1)[1:]
    span = 2 * segment_odds
    bounds = [(lo, min(lo + span, limit)) for lo in range(1, limit, span)]
    run = lambda lh: _sieve_segment(lh[0], lh[1], base)  # noqa: E731
    if workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, bounds))
    else:
        parts = [run(lh) for lh in bounds]
    odd = np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64)
    primes = np.concatenate([np.array([2], dtype=np.int64), odd])
    return PrimeTable.from_primes(limit, primes[primes < limit])


def trial_division_is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# -- disk cache ---------------------------------------------------------------

def save_table(table: PrimeTable, path: str) -> None:
    """Write ``DGPR1 | limit (u64 LE) | prime gaps (u16 LE)``."""
    gaps = np.diff(np.concatenate([[0], table.primes]))
    if gaps.size and gaps.max() >= 2**16:
        raise ResourceError("prime gap does not fit the 16-bit cache encoding")
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(CACHE_MAGIC)
        fh.write(struct.pack("<Q", table.limit))
        fh.write(gaps.astype("<u2").tobytes())
    os.replace(tmp, path)


def load_table(path: str) -> PrimeTable:
    with open(path, "rb") as fh:
        magic = fh.read(len(CACHE_MAGIC))
        if magic != CACHE_MAGIC:
            raise ValueError(f"{path}: not a prime-table cache file")
        (limit,) = struct.unpack("<Q", fh.read(8))
        gaps = np.frombuffer(fh.read(), dtype="<u2").astype(np.int64)
    return PrimeTable.from_primes(limit, np.cumsum(gaps))


def _cache_path(cache_dir: str, limit: int) -> str:
    return os.path.join(cache_dir, f"primes_{limit}.dgpr")


def load_or_sieve(limit: int, cache_dir: str | None = None, workers: int = 1) -> PrimeTable:
    """Sieve below ``limit``, reusing/filling the cache directory if one is configured.

    A cached table with a larger limit is truncated rather than re-sieved.
    """
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    if cache_dir:
        exact = _cache_path(cache_dir, limit)
        if os.path.exists(exact):
            return load_table(exact)
        for path in sorted(glob.glob(os.path.join(cache_dir, "primes_*.dgpr"))):
            try:
                cached = int(os.path.basename(path)[7:-5])
            except ValueError:
                continue
            if cached >= limit:
                big = load_table(path)
                return PrimeTable.from_primes(limit, big.primes[big.primes < limit])
    table = sieve_primes(limit, workers=workers)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        save_table(table, _cache_path(cache_dir, limit))
    return table


# -- arithmetic functions -----------------------------------------------------

def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out: dict[int, int] = {}
    f = 2
    while f * f <= n:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += 1 if f == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi_moebius(n: int) -> tuple[int, int]:
    if not 1 <= n <= MAX_LIMIT:
        raise ResourceError(f"n={n} outside supported range [1, 2**34]")
    fac = factorize(n)
    phi = n
    for p in fac:
        phi = phi // p * (p - 1)
    mu = 0 if any(e > 1 for e in fac.values()) else (-1) ** len(fac)
    return phi, mu


def count_constrained_primes(
    constraint: DigitConstraint,
    b: int,
    k: int,
    weighted: bool = False,
    table: PrimeTable | None = None,
) -> float:
    """Brute-force count of primes (or Lambda-mass) below ``b**k`` meeting ``constraint``.

    Returns ``sum_{n < b^k} Lambda(n) 1(n)`` if weighted, else the prime count.
    A character constraint (``alpha`` set) gives the complex weighted sum.
    """
    constraint.validate(b, k)
    x = b**k
    if x > MAX_LIMIT:
        raise ResourceError(f"b**k = {x} exceeds the sieve bound 2**34")
    if table is None:
        table = load_or_sieve(x)
    if x > table.limit:
        raise ResourceError(f"b**k = {x} exceeds prime table limit {table.limit}")
    if weighted:
        n, lam = table.mangoldt_below(x)
        vals = constraint.weights(n, b, k)
        total = complex(np.dot(lam, vals))
        return total.real if constraint.is_character is False else total
    p = table.primes[: int(np.searchsorted(table.primes, x))]
    if constraint.is_character:
        return complex(np.sum(constraint.weights(p, b, k)))
    return int(np.count_nonzero(constraint.holds(p, b, k)))
