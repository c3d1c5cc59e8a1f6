"""Weyl sums, star discrepancy and an explicit Erdős–Turán bound."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .constants import resolve_ceiling, FloorUndecided, Rational, as_real
from .polynomial import RealPolynomial, dilate

__all__ = [
    "WeylSumValue", "DiscrepancyReport", "phase_fractions", "weyl_sum",
    "weyl_sums", "weyl_sum_general", "sum_exponent", "star_discrepancy",
    "erdos_turan_bound", "ET_CONSTANT",
]

ET_CONSTANT = 3
PHASE_BITS = 64
_TWO64 = float(2**64)


@dataclass(frozen=True)
class WeylSumValue:
    m: int
    d: int
    X: float
    re: float
    im: float

    @property
    def magnitude(self) -> float:
        return math.hypot(self.re, self.im)

    @property
    def exponent(self) -> float:
        return sum_exponent(self)

    def row(self) -> dict:
        return {"m": self.m, "d": self.d, "X": self.X, "re": self.re, "im": self.im,
                "magnitude": self.magnitude, "exponent": self.exponent}


@dataclass(frozen=True)
class DiscrepancyReport:
    N: int
    T: int
    d_star: float
    et_bound: float
    weyl_terms: tuple[float, ...] = field(repr=False)

    @property
    def count_bound(self) -> float:
        """``N * et_bound``: bound on any anchored-interval count deviation."""
        return self.N * self.et_bound

    def to_dict(self) -> dict:
        return {"N": self.N, "T": self.T, "d_star": self.d_star,
                "et_bound": self.et_bound, "count_bound": self.count_bound,
                "weyl_terms": list(self.weyl_terms)}


def phase_fractions(Q: RealPolynomial, N: int, ceiling: int | None = None) -> np.ndarray:
    """``floor(2**64 * frac(Q(x)))`` for x = 1..N as ``uint64``.

    Each value is taken from an enclosure of width at most ``2**-64`` whose
    integer part is certified, so it is within one unit of the exact phase.
    """
    ceiling = resolve_ceiling(ceiling)
    if N < 1:
        return np.zeros(0, dtype=np.uint64)
    if Q.is_rational:
        out = []
        for x in range(1, N + 1):
            lo, _, S = Q._bounds(x, 0)
            out.append(((lo % S) << PHASE_BITS) // S)
        return np.array(out, dtype=np.uint64)
    out = []
    append = out.append
    p = Q._start_bits(N) + 8
    for x in range(1, N + 1):
        bits = p
        while True:
            lo, hi, S = Q._bounds(x, bits)
            f = lo // S
            if hi // S == f and (hi - lo) << PHASE_BITS <= S:
                break
            bits *= 2
            if bits > ceiling:
                raise FloorUndecided(f"phase at x={x} undecided", value=Q, x=x)
        append(((lo - f * S) << PHASE_BITS) // S)
    return np.array(out, dtype=np.uint64)


def _exp_sum(phases: np.ndarray, m: int, blocks: int = 1, threads: int = 1) -> complex:
    """Compensated ``sum e(m * phase)`` with block-wise reduction."""
    mult = (phases * np.uint64(m)) if m != 1 else phases
    theta = mult.astype(np.float64) * (2 * math.pi / _TWO64)
    chunks = np.array_split(theta, max(1, blocks))

    def part(t):
        return math.fsum(np.cos(t)), math.fsum(np.sin(t))

    if threads > 1 and blocks > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(part, chunks))
    else:
        parts = [part(t) for t in chunks]
    return complex(math.fsum(r for r, _ in parts), math.fsum(i for _, i in parts))


def _base_polynomial(P: RealPolynomial, d: int) -> RealPolynomial:
    """``P(dx)/d`` without its constant term."""
    Q = dilate(P, d, 1)
    return RealPolynomial((Rational(0),) + Q.coefficients[1:])


def weyl_sums(P: RealPolynomial, d: int, ms: Sequence[int], X,
              blocks: int = 1, threads: int = 1) -> list[WeylSumValue]:
    """``s_m(X) = sum_{x <= X} e(m P(dx)/d)`` for each m in ``ms``.

    The phases of ``P(dx)/d`` are certified once at 64 bits; the phase for
    frequency m is ``m`` times that residue modulo one.  The constant term is
    dropped since it only rotates the sum.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if X < 1:
        raise ValueError("X must be >= 1")
    N = math.floor(X)
    phases = phase_fractions(_base_polynomial(P, d), N)
    out = []
    for m in ms:
        if m < 0:
            raise ValueError("frequencies must be nonnegative")
        s = _exp_sum(phases, m, blocks, threads)
        out.append(WeylSumValue(m, d, X, s.real, s.imag))
    return out


def weyl_sum(P: RealPolynomial, d: int, m: int, X, blocks: int = 1,
             threads: int = 1) -> WeylSumValue:
    return weyl_sums(P, d, [m], X, blocks, threads)[0]


def weyl_sum_general(alphas: Sequence, X) -> WeylSumValue:
    """``f_k(alpha; X) = sum_{n <= X} e(alpha_1 n + ... + alpha_k n**k)``."""
    if X < 1:
        raise ValueError("X must be >= 1")
    coeffs = (Rational(0),) + tuple(as_real(a) for a in alphas)
    phases = phase_fractions(RealPolynomial(coeffs), math.floor(X))
    s = _exp_sum(phases, 1)
    return WeylSumValue(1, 1, X, s.real, s.imag)


def sum_exponent(s: WeylSumValue) -> float:
    """``log|s| / log X``; ``-inf`` for a vanishing sum."""
    if s.X <= 1:
        return math.nan
    mag = s.magnitude
    if mag == 0:
        return -math.inf
    return math.log(mag) / math.log(s.X)


def star_discrepancy(points) -> float:
    """``D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N)`` over the sorted sample."""
    u = np.sort(np.asarray(points, dtype=np.float64))
    N = u.size
    if N == 0:
        raise ValueError("star discrepancy of an empty sample")
    if u[0] < 0 or u[-1] >= 1:
        raise ValueError("points must lie in [0, 1)")
    i = np.arange(1, N + 1)
    return float(max(np.max(i / N - u), np.max(u - (i - 1) / N)))


def erdos_turan_bound(P: RealPolynomial, d: int, X, T: int) -> DiscrepancyReport:
    """Empirical star discrepancy of ``{P(dx)/d}`` for ``x <= X/d`` and the bound

    ``D*_N <= 1/(T+1) + 3 sum_{m <= T} |s_m(X/d)| / (m N)``.
    """
    if T < 1:
        raise ValueError("T must be >= 1")
    N = math.floor(X / d)
    if N < 1:
        raise ValueError("need X/d >= 1")
    # points include the constant term; sums do not need it
    Q = dilate(P, d, 1)
    fracs = phase_fractions(Q, N).astype(np.float64) / _TWO64
    fracs = np.minimum(fracs, np.nextafter(1.0, 0.0))
    d_star = star_discrepancy(fracs)
    phases = phase_fractions(_base_polynomial(P, d), N)
    terms = tuple(abs(_exp_sum(phases, m)) / m for m in range(1, T + 1))
    bound = 1 / (T + 1) + ET_CONSTANT * math.fsum(terms) / N
    return DiscrepancyReport(N, T, d_star, bound, terms)
