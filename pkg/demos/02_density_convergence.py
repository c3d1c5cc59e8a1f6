"""How fast does #{x <= X : gcd(x, floor P(x)) = 1} / X approach 6/pi^2?"""

import sys

from floorgcd.cli import convergence_table
from floorgcd.sieve import TARGET

print(f"target 6/pi^2 = {TARGET:.10f}\n")

print("P(x) = sqrt(2) x")
sys.stdout.write(convergence_table("sqrt(2)*x", [10**k for k in range(1, 7)], threads=1))

print("\nP(x) = sqrt(2) x^3 + sqrt(3) x + 1/3")
sys.stdout.write(convergence_table("sqrt(2)*x^3 + sqrt(3)*x + 1/3",
                                   [10**k for k in range(1, 6)], threads=1))

# A rational linear coefficient breaks the limit completely.
print("\nP(x) = x  (every gcd is x itself)")
sys.stdout.write(convergence_table("x", [10, 1000, 10**5], threads=1))
