"""Certified floors of real constants and polynomial values.

Every floor below comes with a proof: the value is enclosed in an interval
that is shrunk until both ends have the same integer part.
"""

from floorgcd import certified_floor, parse_constant, parse_polynomial, refine
from floorgcd.polynomial import floor_range

# An enclosure of sqrt(2) to 40 bits.
iv = refine(parse_constant("sqrt(2)"), 40)
print("sqrt(2) in", float(iv.lo), float(iv.hi), "width", float(iv.width))

# Floors of a few constants, with how much precision each one needed.
for text in ["pi/3 + 1/7", "e*1000000", "liouville(10)*1000000", "8/4", "-sqrt(2)"]:
    r = certified_floor(parse_constant(text))
    print(f"{text:>24}  floor {r.value:>8}  exact integer {r.exact_integer}  bits {r.precision_used}")

# The Beatty sequence floor(n sqrt(2)) from the polynomial fast path.
P = parse_polynomial("sqrt(2)*x")
print("floor(n sqrt 2), n = 1..15:", floor_range(P, range(1, 16)))

# A cubic with mixed coefficients at a large argument.
Q = parse_polynomial("sqrt(2)*x^3 + sqrt(3)*x + 1/3")
print("floor Q(10^6) =", floor_range(Q, [10**6])[0])
