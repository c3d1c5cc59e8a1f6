"""Independent reference computations used by the tests.

Nothing here imports the package's arithmetic: floors come from mpmath at
256 bits (or exact Fractions), omega from trial division, counts from plain
loops.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

import mpmath

REF_BITS = 256
MARGIN = mpmath.mpf(2) ** -200


def mp_liouville(b: int):
    with mpmath.workprec(REF_BITS + 32):
        return mpmath.fsum(mpmath.mpf(b) ** -math.factorial(j) for j in range(1, 8))


def mp_leaf(kind: str, arg=None):
    with mpmath.workprec(REF_BITS + 32):
        if kind == "pi":
            return +mpmath.pi
        if kind == "e":
            return +mpmath.e
        if kind == "sqrt":
            return mpmath.sqrt(arg)
        if kind == "liouville":
            return mp_liouville(arg)
        raise ValueError(kind)


def reference_floor(value, exact: Fraction | None = None):
    """``(floor, exact_integer)`` or None when the value is too close to an integer."""
    if exact is not None:
        return math.floor(exact), exact.denominator == 1
    with mpmath.workprec(REF_BITS):
        f = mpmath.floor(value)
        if value - f < MARGIN or f + 1 - value < MARGIN:
            return None
        return int(f), False


class RandomExpr:
    """Random expressions in the constant grammar, carried alongside an
    mpmath value and (when rational) the exact Fraction."""

    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def leaf(self):
        r = self.rng.random()
        if r < 0.35:
            num, den = self.rng.randint(-40, 40), self.rng.randint(1, 12)
            f = Fraction(num, den)
            text = f"({num}/{den})" if num >= 0 else f"(-{-num}/{den})"
            with mpmath.workprec(REF_BITS + 32):
                v = mpmath.mpf(f.numerator) / f.denominator
            return text, v, f
        if r < 0.6:
            k = self.rng.randint(1, 50)
            s = math.isqrt(k)
            return f"sqrt({k})", mp_leaf("sqrt", k), Fraction(s) if s * s == k else None
        if r < 0.75:
            return "pi", mp_leaf("pi"), None
        if r < 0.87:
            return "e", mp_leaf("e"), None
        b = self.rng.randint(2, 10)
        return f"liouville({b})", mp_leaf("liouville", b), None

    def expr(self, depth: int = 3):
        if depth == 0 or self.rng.random() < 0.3:
            return self.leaf()
        op = self.rng.choice("+-*/")
        ta, va, fa = self.expr(depth - 1)
        if op == "/":
            num, den = self.rng.randint(1, 30), self.rng.randint(1, 30)
            if self.rng.random() < 0.5:
                num = -num
            f = Fraction(num, den)
            text = f"({num}/{den})" if num >= 0 else f"(-{-num}/{den})"
            with mpmath.workprec(REF_BITS + 32):
                v = va / (mpmath.mpf(num) / den)
            return f"({ta} / {text})", v, None if fa is None else fa / f
        tb, vb, fb = self.expr(depth - 1)
        with mpmath.workprec(REF_BITS + 32):
            v = {"+": va + vb, "-": va - vb, "*": va * vb}[op]
        if fa is not None and fb is not None:
            f = {"+": fa + fb, "-": fa - fb, "*": fa * fb}[op]
        elif op == "*" and (fa == 0 or fb == 0):
            f = Fraction(0)
        else:
            f = None
        return f"({ta} {op} {tb})", v, f

    def rational_expr(self, depth: int = 3):
        """A rational-only expression, sometimes shifted to an exact integer."""
        while True:
            t, v, f = self.expr(depth)
            if f is not None:
                break
        if self.rng.random() < 0.4:
            shift = math.ceil(f) - f
            text = f"({shift.numerator}/{shift.denominator})"
            with mpmath.workprec(REF_BITS + 32):
                v = v + mpmath.mpf(shift.numerator) / shift.denominator
            return f"({t} + {text})", v, f + shift
        return t, v, f


# polynomial oracles ---------------------------------------------------------

def mp_poly_floor(coeffs_mp, n: int):
    """Reference floor of sum c_j n^j; coeffs are mpf values (or Fractions)."""
    if all(isinstance(c, Fraction) for c in coeffs_mp):
        v = sum(c * n**j for j, c in enumerate(coeffs_mp))
        return math.floor(v)
    with mpmath.workprec(REF_BITS + 64):
        v = mpmath.fsum(mpmath.mpf(c.numerator) / c.denominator * mpmath.mpf(n) ** j
                        if isinstance(c, Fraction) else c * mpmath.mpf(n) ** j
                        for j, c in enumerate(coeffs_mp))
    got = reference_floor(v)
    if got is None:
        raise AssertionError(f"reference cannot resolve floor at n={n}")
    return got[0]


def naive_floors(coeffs_mp, X: int) -> list[int]:
    return [mp_poly_floor(coeffs_mp, n) for n in range(1, X + 1)]


def naive_coprime_count(floors: list[int], X: int) -> int:
    return sum(1 for x in range(1, X + 1) if math.gcd(x, abs(floors[x - 1])) == 1)


def naive_divisor_count(floors: list[int], d: int, X: int) -> int:
    c = 0
    for x in range(1, X + 1):
        g = math.gcd(x, abs(floors[x - 1]))
        if g % d == 0:
            c += 1
    return c


def naive_sifted_count(floors: list[int], X: int, z) -> int:
    small = [p for p in range(2, math.ceil(z)) if p < z and all(p % q for q in range(2, p))]
    c = 0
    for x in range(1, X + 1):
        g = math.gcd(x, abs(floors[x - 1]))
        if all(g % p for p in small):
            c += 1
    return c


# arithmetic oracles ------------------------------------------------------------

def trial_division_omega(n: int) -> int:
    count, p = 0, 2
    while p * p <= n:
        if n % p == 0:
            count += 1
            while n % p == 0:
                n //= p
        p += 1
    return count + (n > 1)


def brute_omega_deviation(X: int, n_min: int) -> int:
    c = 0
    for n in range(n_min, X + 1):
        ll = math.log(math.log(n))
        if abs(trial_division_omega(n) - ll) > ll ** (2 / 3):
            c += 1
    return c


def mp_weyl_sum(coeffs_mp, N: int):
    """sum_{x=1}^N exp(2 pi i Q(x)) at 128 bits; coeffs of Q given as mpf."""
    with mpmath.workprec(128 + 8 * len(coeffs_mp) * 16):
        total = mpmath.mpc(0)
        for x in range(1, N + 1):
            v = mpmath.fsum(c * mpmath.mpf(x) ** j for j, c in enumerate(coeffs_mp))
            total += mpmath.expjpi(2 * (v - mpmath.floor(v)))
        return complex(total)


def brute_star_discrepancy(points) -> float:
    """sup_t |#{u < t}/N - t| over t at the sample points, just past them, and 1."""
    pts = list(points)
    N = len(pts)
    best = 0.0
    cands = set(pts) | {1.0}
    for t in cands:
        below = sum(1 for u in pts if u < t)
        upto = sum(1 for u in pts if u <= t)
        best = max(best, abs(below / N - t), abs(upto / N - t))
    return best
