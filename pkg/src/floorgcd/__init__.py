"""Coprimality of n and floor(P(n)) for real polynomials P.

Certified floors of exact real constants, Weyl sums, discrepancy bounds,
the Legendre sieve and diophantine witnesses, all at desk scale.
"""

__version__ = "0.1.0"

from .constants import (  # noqa: E402
    ComputableReal, FloorResult, FloorUndecided, Interval, certified_floor,
    fractional_part, parse_constant, refine,
)
from .polynomial import (  # noqa: E402
    RealPolynomial, dilate, eval_poly, floor_eval, linear_coefficient, parse_polynomial,
)
from .diophantine import (  # noqa: E402
    continued_fraction, irrationality_exponent_estimate, liouville_witness,
    simultaneous_approx_search, weyl_exponent_params,
)
from .expsum import (  # noqa: E402
    erdos_turan_bound, star_discrepancy, sum_exponent, weyl_sum, weyl_sum_general,
)
from .sieve import (  # noqa: E402
    choose_z, coprime_count, divisor_count, legendre_expansion, mertens_product,
    omega_deviation_count, primorial, sifted_count, zeta2_partial,
)
