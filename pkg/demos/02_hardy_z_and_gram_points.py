"""
Hardy's Z on the critical line and Gram points
==============================================

Z(t) = exp(i theta(t)) L(6 + it) is real.  Gram points solve
theta(t_v) = v pi; the sign of Z there is what the Gram law is about.
"""
import numpy as np

from gramlab import gram_points, gram_points_in, make_context, theta, v0_and_tmin, z_values

ctx = make_context()

t = np.linspace(8, 40, 9)
Z, imag, err = z_values(ctx, t)
for ti, zi, ii in zip(t, Z, imag):
    print(f"Z({ti:5.1f}) = {zi: .10f}   (imag part {ii:.1e})")

# theta increases from t = 7 on; the first Gram index there
v0, t_min = v0_and_tmin(ctx)
print("v0 =", v0, "t_min =", t_min)

pts = gram_points(ctx, range(v0, v0 + 6))
for p in pts:
    print(f"t_{p.v} = {p.t:.12f}   theta/pi - v = {theta(ctx, p.t) / np.pi - p.v:.1e}")

# even-index Gram points in a window, with Z at each
even = gram_points_in(ctx, 100, 130, "even")
Z, _, _ = z_values(ctx, [p.t for p in even])
print("signs of Z at even Gram points in (100, 130]:", np.sign(Z).astype(int))
