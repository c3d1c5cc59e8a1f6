"""Coprimality counts S(X), divisor counts A_d(X), the Legendre sieve and
the arithmetic side (primorials, Mertens products, omega(n) deviations)."""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import NamedTuple

import numpy as np

from .polynomial import RealPolynomial, floor_range

__all__ = [
    "TARGET", "DensityReport", "DivisorCount", "SieveConfig", "OmegaDeviationReport",
    "ExactValue", "DivisorExplosion", "coprime_flags", "coprime_count", "divisor_count",
    "sifted_count", "legendre_expansion", "primes_below", "primorial",
    "mertens_product", "zeta2_partial", "choose_z", "spf_sieve", "omega_values",
    "omega_segment", "omega_deviation_count", "checkpoint_grid", "mobius",
]

TARGET = 6 / math.pi**2
DEFAULT_Z = 13
DIVISOR_CAP = 2**16
BLOCK = 1 << 16
SEGMENT_THRESHOLD = 10**8


class DivisorExplosion(RuntimeError):
    """Too many squarefree divisors of the primorial to enumerate."""


class ExactValue(NamedTuple):
    exact: Fraction
    approx: float


@dataclass(frozen=True)
class DensityReport:
    X: int
    count: int
    checkpoints: tuple[tuple[int, int, float], ...] = field(repr=False)
    target: float = TARGET

    @property
    def ratio(self) -> float:
        return self.count / self.X

    @property
    def abs_error(self) -> float:
        return abs(self.ratio - self.target)


@dataclass(frozen=True)
class DivisorCount:
    d: int
    X: float
    count: int

    @property
    def expected(self) -> float:
        return self.X / self.d**2

    @property
    def deviation(self) -> float:
        return abs(self.count - self.expected)


@dataclass(frozen=True)
class SieveConfig:
    A: float
    c: float
    z: float
    epsilon: float = 0.5
    formula_z: float | None = None
    explicit_z_override: float | None = None


@dataclass(frozen=True)
class OmegaDeviationReport:
    X: int
    n_min: int
    count: int

    @property
    def fraction(self) -> float:
        return self.count / (self.X - self.n_min + 1)


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("FLOORGCD_THREADS", os.cpu_count() or 1))
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return threads


def _blocks(start: int, stop: int, size: int = BLOCK):
    return [(a, min(a + size, stop)) for a in range(start, stop, size)]


def _flags_block(P: RealPolynomial, start: int, stop: int) -> bytes:
    gcd = math.gcd
    floors = floor_range(P, range(start, stop))
    return bytes(gcd(x, f) == 1 for x, f in zip(range(start, stop), floors))


def coprime_flags(P: RealPolynomial, X: int, threads: int | None = None) -> np.ndarray:
    """Boolean array ``flags[x-1] = gcd(x, |floor P(x)|) == 1`` for x = 1..X.

    ``math.gcd`` already ignores signs and has ``gcd(x, 0) = x``.  The range is
    cut into fixed blocks, so the output does not depend on ``threads``.
    """
    threads = _threads(threads)
    blocks = _blocks(1, X + 1)
    if threads == 1 or len(blocks) == 1:
        parts = [_flags_block(P, a, b) for a, b in blocks]
    else:
        with ProcessPoolExecutor(threads) as pool:
            parts = list(pool.map(_flags_block, [P] * len(blocks),
                                  [a for a, _ in blocks], [b for _, b in blocks]))
    return np.frombuffer(b"".join(parts), dtype=np.uint8).astype(bool)


def checkpoint_grid(X: int, checkpoints: int) -> list[int]:
    """Geometric grid ``X, X/2, X/4, ...`` (ascending, deduplicated)."""
    grid = sorted({max(1, X >> i) for i in range(max(1, checkpoints))})
    return grid


def coprime_count(P: RealPolynomial, X, checkpoints: int = 1,
                  threads: int | None = None) -> DensityReport:
    """``S(X) = #{x <= X : gcd(x, floor P(x)) = 1}`` with running checkpoints."""
    X = math.floor(X)
    if X < 1:
        raise ValueError("X must be >= 1")
    flags = coprime_flags(P, X, threads)
    running = np.cumsum(flags, dtype=np.int64)
    rows = tuple((Xi, int(running[Xi - 1]), int(running[Xi - 1]) / Xi)
                 for Xi in checkpoint_grid(X, checkpoints))
    return DensityReport(X, int(running[-1]), rows)


def divisor_count(P: RealPolynomial, d: int, X) -> DivisorCount:
    """``|A_d(X)| = #{x <= X : d | x and d | floor P(x)}``, scanning multiples of d."""
    if d < 1:
        raise ValueError("d must be positive")
    N = math.floor(X)
    xs = range(d, N + 1, d)
    count = sum(1 for f in floor_range(P, xs) if f % d == 0)
    return DivisorCount(d, X, count)


def primes_below(z) -> list[int]:
    n = math.ceil(z)
    if n <= 2:
        return []
    is_p = np.ones(n, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n - 1) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return [int(p) for p in np.flatnonzero(is_p) if p < z]


def primorial(z) -> int:
    """Product of the primes strictly below ``z``."""
    return math.prod(primes_below(z))


def mertens_product(z) -> ExactValue:
    v = math.prod((Fraction(p - 1, p) for p in primes_below(z)), start=Fraction(1))
    return ExactValue(v, float(v))


def zeta2_partial(z) -> ExactValue:
    v = math.prod((1 - Fraction(1, p * p) for p in primes_below(z)), start=Fraction(1))
    return ExactValue(v, float(v))


def sifted_count(P: RealPolynomial, X, z) -> int:
    """``S(X, z)``: x <= X whose gcd with floor P(x) has no prime factor below z."""
    if z < 2:
        raise ValueError("z must be >= 2")
    N = math.floor(X)
    Pz = primorial(z)
    floors = floor_range(P, range(1, N + 1))
    gcd = math.gcd
    return sum(1 for x, f in zip(range(1, N + 1), floors) if gcd(gcd(x, f), Pz) == 1)


def mobius(d: int) -> int:
    mu, n, p = 1, d, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            mu = -mu
        p += 1
    return -mu if n > 1 else mu


def legendre_expansion(P: RealPolynomial, X, z, cap: int = DIVISOR_CAP):
    """``sum_{d | P_z, d <= X} mu(d) |A_d(X)|`` with its individual terms.

    Divisors above X contribute nothing (A_d is empty) and are skipped.
    """
    if z < 2:
        raise ValueError("z must be >= 2")
    ps = primes_below(z)
    if 2 ** len(ps) > cap:
        raise DivisorExplosion(f"2^{len(ps)} divisors of P_z exceed the cap {cap}")
    N = math.floor(X)
    terms = []
    for r in range(len(ps) + 1):
        for combo in combinations(ps, r):
            d = math.prod(combo)
            if d > N:
                continue
            terms.append((d, (-1) ** r, divisor_count(P, d, N).count))
    terms.sort()
    return sum(mu * c for _, mu, c in terms), terms


def choose_z(X, A, epsilon: float = 0.5, override=None) -> SieveConfig:
    """``z = X**(c / log log X)`` with ``c = 1/(2(A+1))`` (natural logs)."""
    if A <= 0:
        raise ValueError("A must be positive")
    c = 1 / (2 * (A + 1))
    formula = None
    if X > math.e**math.e:
        formula = math.exp(c * math.log(X) / math.log(math.log(X)))
    elif override is None:
        raise ValueError("X <= e^e makes log log X <= 1; pass an explicit z")
    z = formula if override is None else override
    return SieveConfig(A, c, z, epsilon, formula, override)


def spf_sieve(n: int) -> np.ndarray:
    """Smallest prime factor of every integer ``0..n`` (``spf[0] = spf[1] = 0``)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest[rest >= 2]] = rest[rest >= 2]
    return spf


def omega_values(n: int, spf: np.ndarray | None = None) -> np.ndarray:
    """Number of distinct prime factors of ``0..n`` (0 for 0 and 1), via SPF."""
    spf = spf_sieve(n) if spf is None else spf
    rest = np.arange(n + 1, dtype=np.int64)
    omega = np.zeros(n + 1, dtype=np.int64)
    active = np.flatnonzero(rest >= 2)
    while active.size:
        p = spf[rest[active]]
        omega[active] += 1
        r = rest[active] // p
        # strip every remaining power of p
        while True:
            div = (r % p) == 0
            if not div.any():
                break
            r[div] //= p[div]
        rest[active] = r
        active = active[r >= 2]
    return omega


def omega_segment(lo: int, hi: int, primes=None) -> np.ndarray:
    """omega(n) for ``lo <= n < hi`` by dividing out primes up to sqrt(hi)."""
    primes = primes_below(math.isqrt(hi - 1) + 1) if primes is None else primes
    rest = np.arange(lo, hi, dtype=np.int64)
    omega = np.zeros(hi - lo, dtype=np.int64)
    for p in primes:
        start = (-lo) % p
        idx = np.arange(start, hi - lo, p)
        if idx.size == 0:
            continue
        omega[idx] += 1
        sub = rest[idx]
        while True:
            div = sub % p == 0
            if not div.any():
                break
            sub[div] //= p
        rest[idx] = sub
    omega += rest > 1
    return omega


def _deviating(ns: np.ndarray, omega: np.ndarray) -> int:
    ll = np.log(np.log(ns.astype(np.float64)))
    return int(np.count_nonzero(np.abs(omega - ll) > ll ** (2 / 3)))


def omega_deviation_count(X: int, n_min: int = 3) -> OmegaDeviationReport:
    """``#{n_min <= n <= X : |omega(n) - log log n| > (log log n)**(2/3)}``."""
    if n_min < 3:
        raise ValueError("n_min must be >= 3 so that log log n > 0")
    if X < n_min:
        raise ValueError("X must be >= n_min")
    if X <= SEGMENT_THRESHOLD:
        omega = omega_values(X)
        ns = np.arange(n_min, X + 1)
        return OmegaDeviationReport(X, n_min, _deviating(ns, omega[n_min:]))
    primes = primes_below(math.isqrt(X) + 1)
    count = 0
    for a, b in _blocks(n_min, X + 1, 10**7):
        count += _deviating(np.arange(a, b), omega_segment(a, b, primes))
    return OmegaDeviationReport(X, n_min, count)
