"""
Numerical identities
====================

A rectangle contour integral equals the sum of residues at even Gram points,
and the oscillatory integral int_T^2T t^c e^(2 pi i t log(t/en)) dt has the
main term n^(c+1/2) e^(pi i/4) when T < n < 2T.
"""
from gramlab import afe_crosscheck, contour_residue_check, make_context
from gramlab.verify import fit_regime_constants, karatsuba_main_term, stationary_phase_In

ctx = make_context()

rec = contour_residue_check(ctx, 30)
print(f"contour {rec.lhs:.12e}")
print(f"residues {rec.rhs:.12e}  rel diff {rec.rel_discrepancy:.1e}")

# an independent evaluation of L by an incomplete-gamma expansion
for s in (6 + 0j, 6 + 200j, 2 + 450j):
    print(s, "afe rel diff", f"{afe_crosscheck(ctx, s).rel_discrepancy:.1e}")

for T in (50.0, 100.0, 200.0, 400.0):
    n = int(1.5 * T)
    val, _ = stationary_phase_In(ctx, n, T)
    main = karatsuba_main_term(n, ctx.c)
    print(f"T={T:5.0f} n={n}: |I - main| / |main| = {abs(val - main) / abs(main):.3f}")

print(fit_regime_constants(ctx))
