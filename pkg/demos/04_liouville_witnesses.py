"""Continued fractions, irrationality exponents and Liouville witnesses."""

from floorgcd import (
    continued_fraction, irrationality_exponent_estimate, liouville_witness, parse_constant,
)

for text in ("sqrt(2)", "pi", "e", "liouville(10)"):
    cf = continued_fraction(parse_constant(text), 12)
    print(f"{text:>14}: {list(cf.quotients)}")

# Quadratic irrationals sit at exponent 2; the Liouville number keeps climbing.
print()
est = irrationality_exponent_estimate(parse_constant("sqrt(2)"), 14)
print("sqrt(2), (q, estimate):", [(q, round(e, 4)) for q, e in est[-5:]])
est = irrationality_exponent_estimate(parse_constant("liouville(10)"), 31)
# the convergents 10^(J!) are the truncations of the series
powers = [(len(str(q)) - 1, round(e, 6)) for q, e in est if str(q).rstrip("0") == "1"]
print("liouville(10), (log10 q, estimate) at q = 10^(J!):", powers)

print()
L = parse_constant("liouville(10)")
for n in (2, 3, 4):
    w = liouville_witness(L, n, 10**30)
    print(f"n = {n}: |L - {w.p}/{w.q}| <= {float(w.err):.3g} <= q^-{n} = {float(w.q) ** -n:.3g}")
print("sqrt(2), n = 4, q <= 10^6:", liouville_witness(parse_constant("sqrt(2)"), 4, 10**6))
