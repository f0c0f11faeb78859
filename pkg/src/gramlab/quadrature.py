"""Gauss-Legendre panel quadrature and deterministic reductions."""
from functools import lru_cache
import math

import numpy as np

from .errors import NumericError

__all__ = ["gauss_legendre", "panel_rule", "adaptive_quad", "csum", "fsum"]

fsum = math.fsum


def csum(values):
    """Correctly rounded sum of complex values, independent of order."""
    v = np.asarray(values, dtype=complex).ravel()
    return complex(math.fsum(v.real), math.fsum(v.imag))


@lru_cache(maxsize=None)
def gauss_legendre(m):
    x, w = np.polynomial.legendre.leggauss(m)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_rule(edges, m):
    """Nodes and weights of an ``m``-point Gauss rule on every panel of ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(m)
    a = edges[:-1, None]
    h = np.diff(edges)[:, None]
    nodes = a + 0.5 * h * (x[None, :] + 1.0)
    weights = 0.5 * h * w[None, :]
    return nodes.ravel(), weights.ravel()


def _panel(f, a, b, m):
    x, w = gauss_legendre(m)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    vals = f(mid + half * x)
    return half * np.dot(w, vals), abs(half) * float(np.dot(w, np.abs(vals)))


def adaptive_quad(f, a, b, tol=1e-10, rtol=0.0, m=20, initial=None, max_panels=200_000, noise=1e-13):
    """Integrate a vectorised ``f`` over the straight segment ``[a, b]``.

    ``a`` and ``b`` may be complex; the integral is then along the segment.
    Each panel is compared with its two halves and bisected until the
    estimated error, summed over panels, is below ``max(tol, rtol*|I|)``.
    A panel is also accepted once its error is below ``noise`` times the
    integral of ``|f|`` over it, the level where rounding in ``f`` dominates.
    ``initial`` is the number of equal starting panels, chosen by the caller
    to resolve known oscillation.  Returns ``(value, error_estimate)``.
    """
    if isinstance(a, complex) or isinstance(b, complex):
        a, b = complex(a), complex(b)
    else:
        a, b = float(a), float(b)
    n0 = max(1, int(initial or 1))
    grid = [a + (b - a) * j / n0 for j in range(n0 + 1)]
    stack = [(grid[j], grid[j + 1], _panel(f, grid[j], grid[j + 1], m)[0]) for j in range(n0)]
    done_vals, done_errs = [], []
    length = abs(b - a)
    evaluated = n0
    while stack:
        lo, hi, whole = stack.pop()
        mid = 0.5 * (lo + hi)
        left, mass_l = _panel(f, lo, mid, m)
        right, mass_r = _panel(f, mid, hi, m)
        evaluated += 2
        err = abs(left + right - whole)
        budget = max(tol * abs(hi - lo) / length, rtol * abs(whole), noise * (mass_l + mass_r))
        if err <= budget or abs(hi - lo) < 1e-13 * length:
            done_vals.append(left + right)
            done_errs.append(err)
            continue
        if evaluated > max_panels:
            raise NumericError(
                "adaptive quadrature exceeded its panel budget",
                a=a, b=b, panels=evaluated, worst_panel=(lo, hi), panel_error=err,
            )
        stack.append((mid, hi, right))
        stack.append((lo, mid, left))
    value = csum(done_vals) if np.iscomplexobj(np.asarray(done_vals)) else fsum(done_vals)
    return value, fsum(done_errs)
