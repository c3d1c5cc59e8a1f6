"""Cancellation in Weyl sums and the discrepancy bound it buys."""

import numpy as np

from floorgcd import erdos_turan_bound, parse_polynomial, weyl_exponent_params
from floorgcd.expsum import weyl_sums

P = parse_polynomial("sqrt(2)*x^2")
params = weyl_exponent_params(2, 2)
print("parameters for omega = 2, k = 2:", params)

# log|s_m| / log X across X: square-root cancellation shows up as ~0.5.
for X in (10**3, 10**4, 10**5):
    exps = [s.exponent for s in weyl_sums(P, 1, range(1, 6), X)]
    print(f"X = {X:>6}  exponents m=1..5: {np.round(exps, 3)}")

# A rational polynomial has no cancellation at resonant frequencies.
print("P = x/3 at m = 3:", weyl_sums(parse_polynomial("x/3"), 1, [3], 999)[0].exponent)

# Empirical discrepancy against the explicit bound, for a few T.
for T in (5, 20, 80):
    rep = erdos_turan_bound(P, 3, 10**4, T)
    print(f"d = 3, T = {T:>2}: D* = {rep.d_star:.5f}  bound = {rep.et_bound:.5f}")
