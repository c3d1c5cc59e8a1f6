"""Exact real constants as refinable expression trees.

Every node can produce a dyadic enclosure of its value at any requested
precision.  Enclosures are computed with integer fixed-point arithmetic and
outward rounding, so an :class:`Interval` returned by :func:`refine` always
contains the exact value.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Union

__all__ = [
    "ComputableReal", "Rational", "Sqrt", "Pi", "EulerE", "Liouville",
    "Add", "Sub", "Mul", "Neg", "Scale",
    "Interval", "FloorResult", "FloorUndecided", "PrecisionCeilingError",
    "ConstantSyntaxError", "as_real", "parse_constant", "refine",
    "certified_floor", "fractional_part", "DEFAULT_CEILING",
    "resolve_ceiling", "set_default_ceiling",
]

START_BITS = 64
DEFAULT_CEILING = int(os.environ.get("FLOORGCD_PRECISION_CEILING", 4096))

Number = Union[int, Fraction]


def resolve_ceiling(ceiling: int | None = None) -> int:
    """Explicit ceiling, else the module default (settable at runtime)."""
    return DEFAULT_CEILING if ceiling is None else ceiling


def set_default_ceiling(bits: int) -> None:
    global DEFAULT_CEILING
    if bits < START_BITS:
        raise ValueError(f"precision ceiling must be at least {START_BITS} bits")
    DEFAULT_CEILING = bits


class FloorUndecided(ArithmeticError):
    """Raised when a floor cannot be certified below the precision ceiling."""

    def __init__(self, message, value=None, x=None):
        super().__init__(message)
        self.value = value
        self.x = x


class PrecisionCeilingError(ArithmeticError):
    """Raised when a requested enclosure needs more bits than allowed."""


class ConstantSyntaxError(ValueError):
    def __init__(self, message, position, text=""):
        super().__init__(f"{message} at position {position}")
        self.position = position
        self.text = text


def _floor_shift(v: int, s: int) -> int:
    return v >> s if s >= 0 else v << -s


def _ceil_shift(v: int, s: int) -> int:
    return -((-v) >> s) if s >= 0 else v << -s


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo_num / 2**bits, hi_num / 2**bits]``."""

    lo_num: int
    hi_num: int
    bits: int

    def __post_init__(self):
        if self.lo_num > self.hi_num:
            raise ValueError("interval with lo > hi")

    @property
    def lo(self) -> Fraction:
        return Fraction(self.lo_num, 1 << self.bits)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.hi_num, 1 << self.bits)

    @property
    def width(self) -> Fraction:
        return Fraction(self.hi_num - self.lo_num, 1 << self.bits)

    @property
    def mid(self) -> float:
        return math.ldexp(self.lo_num + self.hi_num, -self.bits - 1)

    def __contains__(self, x) -> bool:
        x = Fraction(x)
        return self.lo <= x <= self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def pad(self, amount) -> "Interval":
        """Widen on both sides by ``amount`` (rounded outward to this scale)."""
        a = Fraction(amount) * (1 << self.bits)
        k = math.ceil(a)
        return Interval(self.lo_num - k, self.hi_num + k, self.bits)

    def __float__(self) -> float:
        return self.mid

    def __repr__(self) -> str:
        return f"Interval([{float(self.lo)!r}, {float(self.hi)!r}], bits={self.bits})"


@dataclass(frozen=True)
class FloorResult:
    value: int
    exact_integer: bool
    precision_used: int

    def __int__(self) -> int:
        return self.value


class ComputableReal:
    """Base class for expression nodes.

    Subclasses implement ``_enclose(p)`` returning integers ``(lo, hi)`` with
    ``lo / 2**p <= x <= hi / 2**p`` and a width of a few units, and
    ``rational()`` returning the exact value when the subtree is rational.
    """

    __slots__ = ()

    def _enclose(self, p: int) -> tuple[int, int]:
        raise NotImplementedError

    def rational(self) -> Fraction | None:
        return None

    @cached_property
    def mag_bits(self) -> int:
        """Bit length of an integer bound on ``|x|``."""
        lo, hi = self._enclose(4)
        return max(abs(lo), abs(hi)).bit_length() - 3

    # operator sugar; all of these constant-fold rational subtrees
    def __add__(self, other):
        return add(self, as_real(other))

    def __radd__(self, other):
        return add(as_real(other), self)

    def __sub__(self, other):
        return sub(self, as_real(other))

    def __rsub__(self, other):
        return sub(as_real(other), self)

    def __mul__(self, other):
        return mul(self, as_real(other))

    def __rmul__(self, other):
        return mul(as_real(other), self)

    def __neg__(self):
        return neg(self)

    def __truediv__(self, other):
        r = as_real(other).rational()
        if r is None:
            raise ValueError("division is only defined by rational values")
        if r == 0:
            raise ZeroDivisionError("division by zero constant")
        return scale(self, 1 / r)

    def __float__(self) -> float:
        return refine(self, 60).mid


@dataclass(frozen=True, eq=True)
class Rational(ComputableReal):
    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            raise ZeroDivisionError("rational with zero denominator")
        g = math.gcd(self.num, self.den)
        sign = -1 if self.den < 0 else 1
        object.__setattr__(self, "num", sign * self.num // g)
        object.__setattr__(self, "den", sign * self.den // g)

    @classmethod
    def of(cls, x: Number) -> "Rational":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    def rational(self):
        return Fraction(self.num, self.den)

    def _enclose(self, p):
        v = self.num << p if p >= 0 else self.num
        d = self.den if p >= 0 else self.den << -p
        return v // d, -((-v) // d)

    def __str__(self):
        return str(self.num) if self.den == 1 else f"({self.num}/{self.den})"


@dataclass(frozen=True)
class Sqrt(ComputableReal):
    k: int

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("sqrt of a negative integer")

    def rational(self):
        r = math.isqrt(self.k)
        return Fraction(r) if r * r == self.k else None

    def _enclose(self, p):
        if p < 0:
            r = math.isqrt(self.k)
            return _floor_shift(r, -p), _ceil_shift(r + 1, -p)
        n = self.k << (2 * p)
        s = math.isqrt(n)
        return s, s if s * s == n else s + 1

    def __str__(self):
        return f"sqrt({self.k})"


def _atan_inv(x: int, one: int) -> tuple[int, int]:
    """Fixed-point atan(1/x) at scale ``one`` and the number of truncations."""
    x2 = x * x
    power = one // x
    total = power
    n, sign, terms = 3, -1, 1
    while power:
        power //= x2
        total += sign * (power // n)
        sign, n, terms = -sign, n + 2, terms + 1
    return total, 2 * terms


@lru_cache(maxsize=64)
def _pi_bounds(p: int) -> tuple[int, int]:
    g = 16 + p.bit_length()
    one = 1 << (p + g)
    a5, e5 = _atan_inv(5, one)
    a239, e239 = _atan_inv(239, one)
    v = 16 * a5 - 4 * a239
    err = 16 * e5 + 4 * e239 + 8
    return (v - err) >> g, -((-(v + err)) >> g)


@lru_cache(maxsize=64)
def _e_bounds(p: int) -> tuple[int, int]:
    g = 16 + p.bit_length()
    term = 1 << (p + g)
    total, k = 0, 0
    while term:
        total += term
        k += 1
        term //= k
    err = 3 * k + 16
    return (total - err) >> g, -((-(total + err)) >> g)


@dataclass(frozen=True)
class Pi(ComputableReal):
    def _enclose(self, p):
        if p < 2:
            return _floor_shift(3, -p), _ceil_shift(4, -p)
        return _pi_bounds(p)

    def __str__(self):
        return "pi"


@dataclass(frozen=True)
class EulerE(ComputableReal):
    def _enclose(self, p):
        if p < 2:
            return _floor_shift(2, -p), _ceil_shift(3, -p)
        return _e_bounds(p)

    def __str__(self):
        return "e"


@dataclass(frozen=True)
class Liouville(ComputableReal):
    """``sum_{j >= 1} b ** -(j!)``."""

    b: int

    def __post_init__(self):
        if self.b < 2:
            raise ValueError("liouville base must be >= 2")

    def truncation(self, J: int) -> Fraction:
        """Partial sum over ``j <= J``."""
        top = math.factorial(J)
        num = sum(self.b ** (top - math.factorial(j)) for j in range(1, J + 1))
        return Fraction(num, self.b ** top)

    def truncation_index(self, p: int) -> int:
        """Smallest J with b**-((J+1)!) below 2**-(p+2)."""
        J = 1
        while math.factorial(J + 1) * math.log2(self.b) <= p + 2:
            J += 1
        return J

    def _enclose(self, p):
        if p < 1:
            return 0, 1
        J = self.truncation_index(p)
        top = math.factorial(J)
        num = sum(self.b ** (top - math.factorial(j)) for j in range(1, J + 1))
        lo = (num << p) // self.b ** top
        # tail < 2 * b**-((J+1)!) < 2**-(p+1)
        return lo, lo + 2

    def __str__(self):
        return f"liouville({self.b})"


@dataclass(frozen=True)
class Add(ComputableReal):
    a: ComputableReal
    b: ComputableReal

    def rational(self):
        ra, rb = self.a.rational(), self.b.rational()
        return None if ra is None or rb is None else ra + rb

    def _enclose(self, p):
        al, ah = self.a._enclose(p + 2)
        bl, bh = self.b._enclose(p + 2)
        return (al + bl) >> 2, -((-(ah + bh)) >> 2)

    def __str__(self):
        return f"({self.a} + {self.b})"


@dataclass(frozen=True)
class Sub(ComputableReal):
    a: ComputableReal
    b: ComputableReal

    def rational(self):
        ra, rb = self.a.rational(), self.b.rational()
        return None if ra is None or rb is None else ra - rb

    def _enclose(self, p):
        al, ah = self.a._enclose(p + 2)
        bl, bh = self.b._enclose(p + 2)
        return (al - bh) >> 2, -((-(ah - bl)) >> 2)

    def __str__(self):
        return f"({self.a} - {self.b})"


@dataclass(frozen=True)
class Neg(ComputableReal):
    a: ComputableReal

    def rational(self):
        r = self.a.rational()
        return None if r is None else -r

    def _enclose(self, p):
        lo, hi = self.a._enclose(p)
        return -hi, -lo

    def __str__(self):
        return f"(-{self.a})"


@dataclass(frozen=True)
class Mul(ComputableReal):
    a: ComputableReal
    b: ComputableReal

    def rational(self):
        ra, rb = self.a.rational(), self.b.rational()
        if ra == 0 or rb == 0:
            return Fraction(0)
        return None if ra is None or rb is None else ra * rb

    def _enclose(self, p):
        g = max(self.a.mag_bits, self.b.mag_bits, 0) + 2
        q = p + g
        al, ah = self.a._enclose(q)
        bl, bh = self.b._enclose(q)
        prods = (al * bl, al * bh, ah * bl, ah * bh)
        s = q + g
        return min(prods) >> s, -((-max(prods)) >> s)

    def __str__(self):
        return f"({self.a} * {self.b})"


@dataclass(frozen=True)
class Scale(ComputableReal):
    """Product of a subtree with a nonzero rational factor."""

    a: ComputableReal
    factor: Fraction

    def rational(self):
        r = self.a.rational()
        return None if r is None else r * self.factor

    def _enclose(self, p):
        n, d = self.factor.numerator, self.factor.denominator
        g = abs(n).bit_length() + 1
        lo, hi = self.a._enclose(p + g)
        if n < 0:
            lo, hi = -hi, -lo
        n, den = abs(n), d << g
        return (lo * n) // den, -((-hi * n) // den)

    def __str__(self):
        return f"({self.factor} * {self.a})"


def as_real(x) -> ComputableReal:
    if isinstance(x, ComputableReal):
        return x
    if isinstance(x, (int, Fraction)):
        return Rational.of(x)
    if isinstance(x, str):
        return parse_constant(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as an exact real")


def _fold(node: ComputableReal) -> ComputableReal:
    r = node.rational()
    return Rational.of(r) if r is not None and not isinstance(node, Rational) else node


def add(a, b):
    if a.rational() == 0:
        return b
    if b.rational() == 0:
        return a
    return _fold(Add(a, b))


def sub(a, b):
    if b.rational() == 0:
        return a
    if a.rational() == 0:
        return neg(b)
    return _fold(Sub(a, b))


def neg(a):
    return _fold(Neg(a))


def mul(a, b):
    ra, rb = a.rational(), b.rational()
    if ra is not None and rb is not None:
        return Rational.of(ra * rb)
    if ra is not None:
        return scale(b, ra)
    if rb is not None:
        return scale(a, rb)
    return Mul(a, b)


def scale(a, factor) -> ComputableReal:
    factor = Fraction(factor)
    if factor == 0:
        return Rational(0)
    if factor == 1:
        return a
    r = a.rational()
    if r is not None:
        return Rational.of(r * factor)
    if isinstance(a, Scale):
        return scale(a.a, a.factor * factor)
    return Scale(a, factor)


def refine(x: ComputableReal, t: int, ceiling: int | None = None) -> Interval:
    """Enclose ``x`` in a dyadic interval of width at most ``2**-t``."""
    if t < 1:
        raise ValueError("precision must be at least 1 bit")
    ceiling = resolve_ceiling(ceiling)
    r = x.rational()
    if r is not None:
        lo, hi = Rational.of(r)._enclose(t)
        return Interval(lo, hi, t)
    p = t + 2
    while True:
        lo, hi = x._enclose(p)
        if (hi - lo) << t <= 1 << p:
            return Interval(lo, hi, p)
        if p > 2 * max(ceiling, t):
            raise PrecisionCeilingError(f"could not reach {t} bits for {x}")
        p = 2 * p


def certified_floor(x: ComputableReal, ceiling: int | None = None) -> FloorResult:
    """Exact floor of ``x``.

    Rational subtrees are folded first, so rational values are floored exactly
    and flagged when they are integers.  Otherwise the enclosure is refined at
    doubling precision until it no longer straddles an integer.
    """
    ceiling = resolve_ceiling(ceiling)
    r = x.rational()
    if r is not None:
        return FloorResult(math.floor(r), r.denominator == 1, 0)
    p = START_BITS
    while p <= ceiling:
        lo, hi = x._enclose(p)
        f = lo >> p
        if hi >> p == f:
            return FloorResult(f, False, p)
        p *= 2
    raise FloorUndecided(f"floor of {x} undecided at {ceiling} bits", value=x)


def fractional_part(x: ComputableReal, t: int = 53, ceiling: int | None = None) -> Interval:
    """``x - floor(x)`` as an interval of width at most ``2**-t``."""
    f = certified_floor(x, ceiling)
    iv = refine(x, t, ceiling)
    shift = f.value << iv.bits
    lo, hi = max(iv.lo_num - shift, 0), min(iv.hi_num - shift, 1 << iv.bits)
    return Interval(lo, max(lo, hi), iv.bits)


from .parsing import parse_constant  # noqa: E402  (parser builds nodes defined above)
