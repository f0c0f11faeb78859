"""
Mean values of Z at Gram points
===============================

Sums of Z over even-index Gram points grow like +T/pi (weighted by
1/log(t/2pi)) or +2N (unweighted); odd indices give the negatives.
"""
from gramlab import gram_interval_scan, make_context, unweighted_gram_sum, weighted_gram_sum

ctx = make_context()

for T in (100, 200, 400):
    for parity in ("even", "odd"):
        r = weighted_gram_sum(ctx, T, parity, workers=4)
        print(f"T={T:4d} {parity:4s} sum={r.sum:9.3f} dominant={r.dominant:9.3f} "
              f"deviation/T^(3/4)={r.scaled_deviation:.3f} ({r.count} points)")

r = unweighted_gram_sum(ctx, 10, 200, "even")
print(f"sum over v=10..200 of Z(t_2v) = {r.sum:.3f}, 2N = {r.dominant:.0f}")

# a sign scan: Z(t_v) has sign (-1)^v most of the time
scan = gram_interval_scan(ctx, 50, 300, workers=4)
print(scan.summary())
