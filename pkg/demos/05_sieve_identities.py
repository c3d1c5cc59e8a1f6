"""The Legendre sieve next to the coprime count, and omega(n) statistics."""

from floorgcd import (
    choose_z, coprime_count, legendre_expansion, mertens_product, parse_polynomial,
    sifted_count, zeta2_partial,
)
from floorgcd.sieve import TARGET, omega_deviation_count

P = parse_polynomial("sqrt(2)*x")
X = 10**5
S = coprime_count(P, X, threads=1).count
print(f"S(X) = {S} at X = {X}, ratio {S / X:.6f}, target {TARGET:.6f}")

# The asymptotic z is tiny at this scale, so fixed values are more telling.
print("formula z:", round(choose_z(X, 2).z, 4))
for z in (3, 5, 7, 11, 13):
    value, terms = legendre_expansion(P, X, z)
    print(f"z = {z:>2}: S(X, z) = {sifted_count(P, X, z)}  Legendre sum = {value}  "
          f"({len(terms)} divisors)  X*prod(1-1/p^2) = {X * zeta2_partial(z).approx:.1f}  "
          f"prod(1-1/p) = {mertens_product(z).approx:.4f}")

for Y in (10**3, 10**5, 10**6):
    rep = omega_deviation_count(Y)
    print(f"omega far from log log n, n <= {Y}: {rep.count} ({rep.fraction:.3%})")
