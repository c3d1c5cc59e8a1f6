"""Real polynomials with exact coefficients and certified floors at integers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence

from .constants import (
    resolve_ceiling, START_BITS, ComputableReal, FloorResult, FloorUndecided,
    Rational, add, as_real, mul, scale,
)
from .parsing import parse_polynomial_terms

MAX_DEGREE = 16

__all__ = [
    "RealPolynomial", "parse_polynomial", "eval_poly", "floor_eval",
    "floor_result", "floor_range", "dilate", "linear_coefficient", "MAX_DEGREE",
]


@dataclass(frozen=True)
class RealPolynomial:
    """``P(x) = sum_j coefficients[j] * x**j`` (constant term first)."""

    coefficients: tuple[ComputableReal, ...]
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        coeffs = [as_real(c) for c in self.coefficients]
        while len(coeffs) > 1 and coeffs[-1].rational() == 0:
            coeffs.pop()
        if not coeffs:
            coeffs = [Rational(0)]
        if len(coeffs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(coeffs) - 1} exceeds the bound {MAX_DEGREE}")
        lead = coeffs[-1]
        if len(coeffs) > 1 and lead.rational() is None:
            _require_nonzero(lead)
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_text(cls, text: str) -> "RealPolynomial":
        return parse_polynomial(text)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, j: int) -> ComputableReal:
        return self.coefficients[j] if 0 <= j < len(self.coefficients) else Rational(0)

    def __call__(self, n: int) -> ComputableReal:
        return eval_poly(self, n)

    def __str__(self):
        parts = []
        for j, c in enumerate(self.coefficients):
            if c.rational() == 0 and self.degree > 0:
                continue
            parts.append(str(c) if j == 0 else f"{c}*x" if j == 1 else f"{c}*x^{j}")
        return " + ".join(reversed(parts)) or "0"

    def __getstate__(self):
        return {"coefficients": self.coefficients}

    def __setstate__(self, state):
        object.__setattr__(self, "coefficients", state["coefficients"])
        object.__setattr__(self, "_cache", {})

    # fixed-point machinery -------------------------------------------------

    def _split(self):
        """Common denominator D and per-coefficient (is_exact, numerator)."""
        got = self._cache.get("split")
        if got is None:
            rats = [c.rational() for c in self.coefficients]
            D = lcm(*(r.denominator for r in rats if r is not None)) if any(
                r is not None for r in rats) else 1
            got = (D, [(r is not None, r * D if r is not None else None) for r in rats])
            self._cache["split"] = got
        return got

    @property
    def is_rational(self) -> bool:
        return all(exact for exact, _ in self._split()[1])

    def _scaled_coefficients(self, p: int):
        """Lower and upper coefficient integers at scale ``D * 2**p``."""
        key = ("coef", p)
        got = self._cache.get(key)
        if got is None:
            D, parts = self._split()
            los, his = [], []
            for c, (exact, r) in zip(self.coefficients, parts):
                if exact:
                    v = int(r) << p
                    los.append(v)
                    his.append(v)
                else:
                    lo, hi = c._enclose(p)
                    los.append(lo * D)
                    his.append(hi * D)
            got = (los, his, D << p)
            self._cache[key] = got
        return got

    def _bounds(self, n: int, p: int):
        los, his, S = self._scaled_coefficients(p)
        if n >= 0:
            lo = hi = 0
            for a, b in zip(reversed(los), reversed(his)):
                lo = lo * n + a
                hi = hi * n + b
            return lo, hi, S
        lo = hi = 0
        power = 1
        for a, b in zip(los, his):
            if power >= 0:
                lo += a * power
                hi += b * power
            else:
                lo += b * power
                hi += a * power
            power *= n
        return lo, hi, S

    def _start_bits(self, n: int) -> int:
        return START_BITS + self.degree * abs(n).bit_length()


def _require_nonzero(c: ComputableReal, ceiling: int | None = None):
    ceiling = resolve_ceiling(ceiling)
    p = START_BITS
    while p <= ceiling:
        lo, hi = c._enclose(p)
        if lo > 0 or hi < 0:
            return
        p *= 2
    raise ValueError(f"could not certify that leading coefficient {c} is nonzero")


def parse_polynomial(text: str) -> RealPolynomial:
    """Parse text such as ``"sqrt(2)*x^3 + (1/3)*x + pi"``."""
    terms = parse_polynomial_terms(text)
    k = max(terms, default=0)
    return RealPolynomial(tuple(terms.get(j, Rational(0)) for j in range(k + 1)))


def eval_poly(P: RealPolynomial, n: int) -> ComputableReal:
    """``P(n)`` as an exact expression tree, built in Horner form."""
    acc: ComputableReal = Rational(0)
    for c in reversed(P.coefficients):
        acc = add(mul(acc, Rational(n)), c)
    return acc


def floor_result(P: RealPolynomial, n: int, ceiling: int | None = None) -> FloorResult:
    ceiling = resolve_ceiling(ceiling)
    if P.is_rational:
        lo, _, S = P._bounds(n, 0)
        q, r = divmod(lo, S)
        return FloorResult(q, r == 0, 0)
    p = P._start_bits(n)
    while p <= ceiling:
        lo, hi, S = P._bounds(n, p)
        f = lo // S
        if hi // S == f:
            return FloorResult(f, False, p)
        p *= 2
    raise FloorUndecided(f"floor of P({n}) undecided at {ceiling} bits", value=P, x=n)


def floor_eval(P: RealPolynomial, n: int, ceiling: int | None = None) -> int:
    """Exactly ``floor(P(n))`` (toward minus infinity)."""
    return floor_result(P, n, ceiling).value


def floor_range(P: RealPolynomial, ns: Iterable[int], ceiling: int | None = None) -> list[int]:
    """``floor(P(n))`` for every ``n`` in ``ns``; the hot loop of every count."""
    ns = list(ns)
    if not ns:
        return []
    if P.is_rational:
        return [floor_eval(P, n) for n in ns]
    p = P._start_bits(max(abs(ns[0]), abs(ns[-1])))
    out = []
    append = out.append
    los, his, S = P._scaled_coefficients(p)
    if len(los) == 2 and min(ns) >= 0:
        a0, a1 = los
        b0, b1 = his
        for n in ns:
            f = (a1 * n + a0) // S
            if (b1 * n + b0) // S == f:
                append(f)
            else:
                append(floor_eval(P, n, ceiling))
        return out
    for n in ns:
        lo, hi, _ = P._bounds(n, p)
        f = lo // S
        append(f if hi // S == f else floor_eval(P, n, ceiling))
    return out


def dilate(P: RealPolynomial, d: int, m: int) -> RealPolynomial:
    """``Q(x) = m * P(d*x) / d``; coefficient j becomes ``m * d**(j-1) * c_j``."""
    if d < 1 or m < 1:
        raise ValueError("d and m must be positive integers")
    return RealPolynomial(tuple(
        scale(c, Fraction(m) * Fraction(d) ** (j - 1)) for j, c in enumerate(P.coefficients)))


def linear_coefficient(P: RealPolynomial) -> ComputableReal:
    if P.degree < 1:
        raise ValueError("a degree-0 polynomial has no linear coefficient")
    return P.coefficient(1)


def from_coefficients(coeffs: Sequence) -> RealPolynomial:
    return RealPolynomial(tuple(as_real(c) for c in coeffs))
