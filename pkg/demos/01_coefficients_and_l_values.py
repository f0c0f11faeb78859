"""
Coefficients and L-values of the discriminant form
==================================================

Build the tau table, check it against the Hecke relations, then evaluate
L(s) inside the critical strip and compare with the Dirichlet series where
that converges.
"""
import numpy as np

from gramlab import l_direct, l_eval, make_context, tau_coefficients, verify_coefficients

# tau(n) for n <= 4000, exact integers
c = tau_coefficients(4000)
print("tau(1..8):", c.exact[:8])
print(verify_coefficients(c).summary())

# normalized coefficients stay within the divisor bound
print("max |a(n)| n^(-11/2) =", np.max(np.abs(c.normalized)))

ctx = make_context(c)

# right of the strip both methods apply
for t in (0.0, 10.0, 50.0):
    s = 8.5 + 1j * t
    a, b = l_eval(ctx, s), l_direct(ctx, s)
    print(f"s = {s}: integral {a.value:.15f}  series {b.value:.15f}")

# the centre of the strip
r = l_eval(ctx, 6)
print("L(6) =", r.value.real, "+/-", r.est_error)
