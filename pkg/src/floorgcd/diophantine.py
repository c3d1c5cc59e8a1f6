"""Continued fractions, Liouville witnesses and the Weyl parameter calculus."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import mpmath

from .constants import (
    resolve_ceiling, START_BITS, ComputableReal, FloorUndecided, as_real,
)

__all__ = [
    "CFExpansion", "LiouvilleWitness", "WeylParams", "Approximation",
    "continued_fraction", "convergents_up_to", "liouville_witness",
    "irrationality_exponent_estimate", "weyl_exponent_params",
    "simultaneous_approx_search",
]

BRUTE_SCAN_CAP = 10**4


@dataclass(frozen=True)
class CFExpansion:
    a0: int
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]
    terminated: bool = False

    @property
    def quotients(self) -> tuple[int, ...]:
        return (self.a0, *self.partial_quotients)

    def to_dict(self) -> dict:
        return {
            "a0": self.a0,
            "partial_quotients": list(self.partial_quotients),
            "convergents": [[p, q] for p, q in self.convergents],
            "terminated": self.terminated,
        }


@dataclass(frozen=True)
class LiouvilleWitness:
    n: int
    p: int
    q: int
    err: Fraction  # dyadic upper bound on |alpha - p/q|

    def to_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "q": self.q, "err": float(self.err),
                "bound": float(Fraction(1, self.q ** self.n))}


@dataclass(frozen=True)
class WeylParams:
    omega: float
    k: int
    delta: float
    rho: float
    tau: float
    X0: float = 1

    def check(self) -> None:
        k = self.k
        assert self.delta < 1 / (self.omega + 1)
        assert self.rho > 0
        assert self.tau == self.delta / (2 * k * (k - 1))
        assert 1 / self.tau >= 4 * k * (k - 1)
        assert self.delta > k * self.tau


class Approximation(NamedTuple):
    q: int
    a: tuple[int, ...]


def _rational_cf(x: Fraction, limit: int) -> list[int]:
    """Floor-recursion quotients of a rational, at most ``limit`` of them."""
    out = []
    num, den = x.numerator, x.denominator
    while den and len(out) < limit:
        a, r = divmod(num, den)
        out.append(a)
        num, den = den, r
    return out


def _convergents(quotients: Sequence[int]) -> list[tuple[int, int]]:
    p0, q0, p1, q1 = 0, 1, 1, 0
    out = []
    for a in quotients:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def _expansion(quotients: list[int], terminated: bool) -> CFExpansion:
    return CFExpansion(quotients[0], tuple(quotients[1:]),
                       tuple(_convergents(quotients)), terminated)


def continued_fraction(alpha, terms: int, ceiling: int | None = None) -> CFExpansion:
    """First ``terms`` quotients ``[a0; a1, ...]`` of ``alpha``.

    Each quotient is certified: the two endpoints of an enclosure of alpha
    are expanded and only their common prefix is kept, since the set of reals
    sharing a prefix is an interval.  Rationals use the Euclidean algorithm
    and may terminate early (``terminated=True``).
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    alpha = as_real(alpha)
    ceiling = resolve_ceiling(ceiling)
    r = alpha.rational()
    if r is not None:
        qs = _rational_cf(r, terms + 1)
        return _expansion(qs[:terms], len(qs) <= terms)
    p = START_BITS
    while p <= 2 * ceiling:
        lo, hi = alpha._enclose(p)
        a = _rational_cf(Fraction(lo, 1 << p), terms)
        b = _rational_cf(Fraction(hi, 1 << p), terms)
        common = []
        for x, y in zip(a, b):
            if x != y:
                break
            common.append(x)
        if len(common) >= terms:
            return _expansion(common[:terms], False)
        p *= 2
    raise FloorUndecided(f"continued fraction of {alpha} undecided at {ceiling} bits",
                         value=alpha)


def convergents_up_to(alpha, q_max: int, ceiling: int | None = None) -> CFExpansion:
    """Expansion long enough that its last convergent exceeds ``q_max``
    (or the rational expansion terminated)."""
    terms = 8
    while True:
        cf = continued_fraction(alpha, terms, ceiling)
        if cf.terminated or cf.convergents[-1][1] > q_max:
            return cf
        terms *= 2


def _distance(alpha: ComputableReal, p: int, q: int, bits: int) -> tuple[Fraction, Fraction, int]:
    """Lower and upper bounds on |alpha - p/q| (upper is dyadic at ``bits``)."""
    lo, hi = alpha._enclose(bits)
    # q*alpha*2^bits - p*2^bits, in [q*lo - P, q*hi - P]
    P = p << bits
    a, b = q * lo - P, q * hi - P
    upper_num = max(abs(a), abs(b))
    lower_num = 0 if a <= 0 <= b else min(abs(a), abs(b))
    # |alpha - p/q| = |q alpha - p| / q; round the upper bound up to the dyadic grid
    scale = 1 << bits
    upper = Fraction(-((-upper_num) // q), scale)
    lower = Fraction(lower_num, q * scale)
    return lower, upper, bits


def _certify_witness(alpha, n, p, q, ceiling) -> LiouvilleWitness | None:
    target = Fraction(1, q ** n)
    r = alpha.rational()
    if r is not None:
        err = abs(r - Fraction(p, q))
        return LiouvilleWitness(n, p, q, err) if err <= target else None
    bits = max(START_BITS, n * q.bit_length() + 32)
    while bits <= 2 * ceiling:
        lower, upper, _ = _distance(alpha, p, q, bits)
        if upper <= target:
            return LiouvilleWitness(n, p, q, upper)
        if lower > target:
            return None
        bits *= 2
    raise FloorUndecided(f"witness check |alpha - {p}/{q}| <= {q}^-{n} undecided")


def liouville_witness(alpha, n: int, q_max: int,
                      ceiling: int | None = None) -> LiouvilleWitness | None:
    """Search ``2 <= q <= q_max`` for ``|alpha - p/q| <= q**-n``.

    Convergents come first; among those that qualify the strongest one
    (smallest ``err * q**n``) is returned.  If none qualifies, small ``q`` are
    scanned directly with ``p`` the nearest integer to ``q * alpha``.
    """
    if n < 1 or q_max < 2:
        raise ValueError("need n >= 1 and q_max >= 2")
    alpha = as_real(alpha)
    ceiling = resolve_ceiling(ceiling)
    cf = convergents_up_to(alpha, q_max, ceiling)
    best = None
    for p, q in cf.convergents:
        if q < 2 or q > q_max:
            continue
        w = _certify_witness(alpha, n, p, q, ceiling)
        if w is not None and (best is None or w.err * q ** n < best.err * best.q ** best.n):
            best = w
    if best is not None:
        return best
    top = min(q_max, BRUTE_SCAN_CAP)
    bits = START_BITS + n * top.bit_length()
    lo, hi = alpha._enclose(bits)
    one = 1 << bits
    for q in range(2, top + 1):
        p = (q * lo + (one >> 1)) >> bits
        # skip quickly when even the best case misses the target by a margin
        gap = min(abs(q * lo - p * one), abs(q * hi - p * one))
        if gap * q ** n > 2 * q * one and not (q * lo <= p * one <= q * hi):
            continue
        w = _certify_witness(alpha, n, p, q, ceiling)
        if w is not None:
            return w
    return None


def _log_distance(alpha: ComputableReal, p: int, q: int, ceiling: int) -> float:
    """Natural log of |alpha - p/q| to about 30 bits of relative accuracy."""
    bits = max(START_BITS, 4 * q.bit_length() + 32)
    while bits <= 2 * ceiling:
        lower, upper, _ = _distance(alpha, p, q, bits)
        if lower > 0 and (upper - lower) * (1 << 30) <= lower:
            return math.log(upper.numerator) - math.log(upper.denominator)
        bits *= 2
    if alpha.rational() is not None:
        return -math.inf
    raise FloorUndecided(f"|alpha - {p}/{q}| not resolved at {ceiling} bits")


def irrationality_exponent_estimate(alpha, terms: int,
                                    ceiling: int | None = None) -> list[tuple[int, float]]:
    """``(q, -log|alpha - p/q| / log q)`` for each convergent with ``q > 1``.

    For a rational alpha the expansion stops at alpha itself, whose estimate
    is ``inf``.
    """
    if terms < 2:
        raise ValueError("terms must be >= 2")
    alpha = as_real(alpha)
    ceiling = resolve_ceiling(ceiling)
    cf = continued_fraction(alpha, terms, ceiling)
    exact = alpha.rational()
    out = []
    for p, q in cf.convergents:
        if q < 2:
            continue
        if exact is not None and Fraction(p, q) == exact:
            out.append((q, math.inf))
            break
        out.append((q, -_log_distance(alpha, p, q, ceiling) / math.log(q)))
    return out


def weyl_exponent_params(omega, k: int, X0=1) -> WeylParams:
    """``delta = 1/(2(omega+1))``, ``rho = (1-(omega+1)delta)/(2 omega)``,
    ``tau = delta/(2k(k-1))``.  Integer or Fraction omega gives exact values."""
    if k < 2:
        raise ValueError("the Weyl parameter calculus needs degree k >= 2")
    if omega <= 0:
        raise ValueError("omega must be positive")
    if isinstance(omega, (int, Fraction)):
        omega = Fraction(omega)
    delta = 1 / (2 * (omega + 1))
    rho = (1 - (omega + 1) * delta) / (2 * omega)
    tau = delta / (2 * k * (k - 1))
    params = WeylParams(omega, k, delta, rho, tau, X0)
    params.check()
    return params


def simultaneous_approx_search(alphas, X, delta, ceiling: int | None = None) -> Approximation | None:
    """Smallest ``1 <= q <= X**delta`` with ``|q alpha_j - a_j| <= X**(delta-j)``
    for every j, taking ``a_j`` the nearest integer to ``q alpha_j``."""
    if not X > 1 or not 0 < delta < 1:
        raise ValueError("need X > 1 and 0 < delta < 1")
    alphas = [as_real(a) for a in alphas]
    ceiling = resolve_ceiling(ceiling)
    with mpmath.workprec(256):
        Xm, dm = mpmath.mpf(X), mpmath.mpf(delta)
        q_max = int(mpmath.floor(mpmath.power(Xm, dm) + mpmath.mpf(2) ** -200))
        thresholds = [mpmath.power(Xm, dm - j) for j in range(1, len(alphas) + 1)]
        eps = mpmath.mpf(2) ** -200
        # rational brackets around each threshold; the gap is far below any test margin
        brackets = [(_mpf_fraction(t * (1 - eps)), _mpf_fraction(t * (1 + eps)))
                    for t in thresholds]

    def check(q: int, bits: int):
        a_out = []
        for alpha, (t_lo, t_hi) in zip(alphas, brackets):
            lo, hi = alpha._enclose(bits)
            one = 1 << bits
            a = (q * lo + (one >> 1)) >> bits
            r_lo, r_hi = q * lo - a * one, q * hi - a * one
            upper = Fraction(max(abs(r_lo), abs(r_hi)), one)
            lower = Fraction(0 if r_lo <= 0 <= r_hi else min(abs(r_lo), abs(r_hi)), one)
            if upper <= t_lo:
                a_out.append(a)
            elif lower > t_hi:
                return False
            else:
                return None
        return tuple(a_out)

    base = START_BITS + max(q_max, 1).bit_length()
    for q in range(1, q_max + 1):
        bits = base
        while True:
            got = check(q, bits)
            if got is not None:
                break
            bits *= 2
            if bits > 2 * ceiling:
                raise FloorUndecided(f"simultaneous approximation at q={q} undecided")
        if got is not False:
            return Approximation(q, got)
    return None


def _mpf_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)
