import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from floorgcd.polynomial import parse_polynomial
from floorgcd.sieve import (
    TARGET, DivisorExplosion, checkpoint_grid, choose_z, coprime_count, coprime_flags,
    divisor_count, legendre_expansion, mertens_product, mobius, omega_deviation_count,
    omega_segment, omega_values, primes_below, primorial, sifted_count, spf_sieve,
    zeta2_partial,
)

from oracles import (
    RandomExpr, brute_omega_deviation, naive_coprime_count, naive_divisor_count,
    naive_floors, naive_sifted_count, trial_division_omega,
)

ROOT2 = parse_polynomial("sqrt(2)*x")


def root2_floors(X):
    return [math.isqrt(2 * x * x) for x in range(1, X + 1)]


def test_coprime_count_small_examples():
    assert coprime_count(ROOT2, 10).count == 6
    assert coprime_count(parse_polynomial("x"), 100).count == 1
    assert coprime_count(ROOT2, 10).count == naive_coprime_count(root2_floors(10), 10)


def test_coprime_count_zero_floor_uses_gcd_with_zero():
    # floor(x/1000) = 0 for x < 1000, and gcd(x, 0) = x is 1 only for x = 1
    assert coprime_count(parse_polynomial("x/1000"), 999).count == 1


def test_negative_floors_use_absolute_value():
    neg = parse_polynomial("-sqrt(2)*x")
    floors = [-math.isqrt(2 * x * x) - 1 for x in range(1, 501)]
    assert coprime_count(neg, 500).count == naive_coprime_count(floors, 500)


def test_divisor_count_examples():
    assert divisor_count(ROOT2, 2, 10).count == 3
    assert divisor_count(ROOT2, 3, 10).count == 1
    assert divisor_count(ROOT2, 1, 10).count == 10
    dc = divisor_count(ROOT2, 5, 1000)
    assert dc.expected == 40 and dc.deviation == abs(dc.count - 40)
    with pytest.raises(ValueError):
        divisor_count(ROOT2, 0, 10)


def test_sifted_and_legendre_examples():
    assert sifted_count(ROOT2, 10, 3) == 7
    value, terms = legendre_expansion(ROOT2, 100, 6)
    assert value == sifted_count(ROOT2, 100, 6) == 63
    assert [d for d, _, _ in terms] == [1, 2, 3, 5, 6, 10, 15, 30]
    assert all(mu == mobius(d) for d, mu, _ in terms)


def test_legendre_guard():
    with pytest.raises(DivisorExplosion):
        legendre_expansion(ROOT2, 100, 60, cap=2**16)


def test_prime_helpers():
    assert primes_below(10) == [2, 3, 5, 7]
    assert primes_below(7) == [2, 3, 5]
    assert primes_below(2) == []
    assert primorial(10) == 210
    assert mertens_product(10).exact == Fraction(8, 35)
    assert zeta2_partial(10).exact == Fraction(768, 1225)
    assert [mobius(n) for n in range(1, 13)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_zeta2_partials_decrease_to_target():
    vals = [zeta2_partial(z).approx for z in (3, 5, 10, 30, 100, 1000)]
    assert vals == sorted(vals, reverse=True)
    assert all(v > TARGET for v in vals)
    assert vals[-1] - TARGET < 1e-3


def test_choose_z():
    cfg = choose_z(10**6, 2)
    assert cfg.c == pytest.approx(1 / 6)
    assert cfg.z == pytest.approx(math.exp(math.log(1e6) / 6 / math.log(math.log(1e6))))
    assert cfg.z == pytest.approx(2.4035, abs=1e-4)
    assert choose_z(10**6, 2, override=13).z == 13
    with pytest.raises(ValueError):
        choose_z(10, 2)
    assert choose_z(10, 2, override=5).formula_z is None
    with pytest.raises(ValueError):
        choose_z(10**6, 0)


def test_checkpoint_grid():
    assert checkpoint_grid(1000, 4) == [125, 250, 500, 1000]
    assert checkpoint_grid(3, 10) == [1, 3]


def test_density_near_target():
    rep = coprime_count(ROOT2, 10**5, checkpoints=5)
    assert rep.abs_error < 5e-3
    assert rep.checkpoints[-1] == (10**5, rep.count, rep.ratio)
    assert [X for X, _, _ in rep.checkpoints] == checkpoint_grid(10**5, 5)


def test_thread_count_does_not_change_flags():
    P = parse_polynomial("sqrt(3)*x^2 + pi*x")
    X = 3 * 2**16 + 17  # several blocks
    a = coprime_flags(P, X, threads=1)
    b = coprime_flags(P, X, threads=3)
    assert np.array_equal(a, b)


def test_omega_examples():
    assert omega_deviation_count(6, 3).count == 3
    assert list(omega_values(12)) == [0, 0, 1, 1, 1, 1, 2, 1, 1, 1, 2, 1, 2]
    spf = spf_sieve(30)
    assert spf[29] == 29 and spf[28] == 2 and spf[27] == 3 and spf[1] == 0
    with pytest.raises(ValueError):
        omega_deviation_count(10, 2)


def test_omega_matches_trial_division():
    om = omega_values(5000)
    assert all(om[n] == trial_division_omega(n) for n in range(2, 5001))
    assert omega_deviation_count(5000).count == brute_omega_deviation(5000, 3)


def test_omega_segment_matches_spf():
    om = omega_values(200_000)
    primes = primes_below(math.isqrt(199_999) + 1)
    assert np.array_equal(omega_segment(150_000, 200_000, primes), om[150_000:200_000])
    assert np.array_equal(omega_segment(2, 1000), om[2:1000])


# property tests ---------------------------------------------------------------

@st.composite
def polys(draw):
    gen = RandomExpr(draw(st.integers(0, 2**32 - 1)))
    k = draw(st.integers(1, 3))
    while True:
        exprs = [gen.expr(1) for _ in range(k + 1)]
        text = " + ".join(f"({t})*x^{j}" for j, (t, _, _) in enumerate(exprs))
        try:
            P = parse_polynomial(text)
        except ValueError:
            continue
        coeffs = [f if f is not None else v for _, v, f in exprs]
        return P, coeffs


@settings(max_examples=40, deadline=None)
@given(polys(), st.integers(1, 300), st.integers(1, 12))
def test_counts_match_brute_force(poly, X, d):
    P, coeffs = poly
    try:
        floors = naive_floors(coeffs, X)
    except AssertionError:
        return
    assert coprime_count(P, X).count == naive_coprime_count(floors, X)
    assert divisor_count(P, d, X).count == naive_divisor_count(floors, d, X)


@settings(max_examples=30, deadline=None)
@given(polys(), st.integers(1, 300), st.sampled_from([2, 3, 5.5, 8, 13]))
def test_sifted_count_and_legendre_identity(poly, X, z):
    P, coeffs = poly
    try:
        floors = naive_floors(coeffs, X)
    except AssertionError:
        return
    s = sifted_count(P, X, z)
    assert s == naive_sifted_count(floors, X, z)
    assert legendre_expansion(P, X, z)[0] == s


@settings(max_examples=30, deadline=None)
@given(polys(), st.integers(1, 400), st.integers(2, 40))
def test_sieve_sandwich(poly, X, z):
    # coprime pairs survive every sieve; the sieve overcounts by at most the
    # pairs whose gcd has all prime factors >= z
    P, _ = poly
    S = coprime_count(P, X).count
    Sz = sifted_count(P, X, z)
    assert S <= Sz
    big = sum(divisor_count(P, p, X).count for p in primes_below(X + 1) if p >= z)
    assert Sz - S <= big


@settings(max_examples=30, deadline=None)
@given(polys(), st.integers(1, 500), st.integers(1, 500))
def test_count_monotone_in_X(poly, X1, dX):
    P, _ = poly
    a, b = coprime_count(P, X1).count, coprime_count(P, X1 + dX).count
    assert a <= b <= a + dX


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 3000), st.integers(0, 3000))
def test_omega_deviation_window(n_min, span):
    X = n_min + span
    assert omega_deviation_count(X, n_min).count == brute_omega_deviation(X, n_min)
