"""Gram points: solutions of ``theta(t_v) = v pi`` in the range where theta increases."""
from dataclasses import dataclass
import math

import numpy as np

from .errors import ConfigurationError, DomainError, NumericError
from .lfunc import theta, theta_prime
from .special import trigamma

__all__ = [
    "GramPoint",
    "v0_and_tmin",
    "gram_point",
    "gram_points",
    "gram_points_in",
    "gram_count",
    "gram_seed",
]

T_MIN = 7.0
CERTIFY_TO = 2000.0
CERTIFY_STEP = 0.05
MAX_GRAM_T = 1e4
RESIDUAL_TOL = 1e-10
NEWTON_TOL = 1e-12
NEWTON_STEPS = 50


@dataclass(frozen=True)
class GramPoint:
    v: int
    t: float
    residual: float


def v0_and_tmin(ctx):
    """Certify ``theta' > 0`` on ``[7, 2000]`` and return ``(v0, 7.0)``.

    ``theta''(t) = -Im psi'(k/2 + it)`` and ``|psi'(k/2 + it)| <= psi'(k/2)``,
    so between grid points spaced ``h`` apart ``theta'`` can dip at most
    ``psi'(k/2) h / 2`` below the smaller endpoint value.
    """
    return ctx.memo("gram_v0", lambda: _certify(ctx))


def _certify(ctx):
    grid = np.arange(T_MIN, CERTIFY_TO + CERTIFY_STEP / 2, CERTIFY_STEP)
    d1 = theta_prime(ctx, grid)
    bound = float(trigamma(ctx.weight / 2).real)
    lower = np.minimum(d1[:-1], d1[1:]) - bound * CERTIFY_STEP / 2
    if not np.all(lower > 0):
        j = int(np.argmin(lower))
        raise ConfigurationError(
            f"monotonicity certificate failed near t = {grid[j]:.6g} (lower bound {lower[j]:.3g})"
        )
    v0 = math.ceil(theta(ctx, T_MIN) / math.pi)
    return (int(v0), T_MIN)


def gram_seed(v):
    """Solve ``t log(t/(2 pi e)) - pi/4 = v pi`` by Newton's method from above.

    The left side is convex in ``t``, so iterates started right of the root
    decrease monotonically onto it.
    """
    c = 2 * math.pi * math.e
    target = (np.asarray(v, dtype=float) + 0.25) * math.pi
    t = c * math.e + np.abs(target)
    for _ in range(60):
        t = t - (t * np.log(t / c) - target) / (np.log(t / c) + 1.0)
    return np.maximum(t, T_MIN)


def _upper_bracket(ctx, target, t):
    hi = np.maximum(t, T_MIN + 1.0)
    for _ in range(60):
        low = theta(ctx, hi) < target
        if not np.any(low):
            return hi
        hi = np.where(low, hi * 1.5, hi)
    raise NumericError("no upper bracket for Gram point", target=float(np.max(target)))


def gram_points(ctx, vs):
    """Vectorised safeguarded Newton solve for the Gram points of indices ``vs``."""
    v0, t_min = v0_and_tmin(ctx)
    vs = np.atleast_1d(np.asarray(vs, dtype=np.int64))
    if vs.size == 0:
        return []
    if np.any(vs < v0):
        raise DomainError(f"Gram index must be >= v0 = {v0}")
    target = vs * math.pi
    top = theta(ctx, MAX_GRAM_T)
    if np.any(target > top):
        raise DomainError(f"Gram points are computed only for t <= {MAX_GRAM_T:g}")
    t = gram_seed(vs)
    lo = np.full(vs.shape, t_min)
    hi = _upper_bracket(ctx, target, t)
    t = np.clip(t, lo, hi)
    # every point iterates until its own stopping test, so results do not depend on the batch
    active = np.ones(vs.shape, dtype=bool)
    for _ in range(NEWTON_STEPS):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        ti = t[idx]
        r = theta(ctx, ti) - target[idx]
        lo[idx] = np.where(r < 0, ti, lo[idx])
        hi[idx] = np.where(r > 0, ti, hi[idx])
        conv = np.abs(r) <= NEWTON_TOL * np.maximum(1.0, np.abs(target[idx]))
        new = ti - r / theta_prime(ctx, ti)
        outside = ~((new > lo[idx]) & (new < hi[idx]))
        new = np.where(outside, 0.5 * (lo[idx] + hi[idx]), new)
        stall = new == ti
        t[idx] = np.where(conv | stall, ti, new)
        active[idx] = ~(conv | stall)
    r = np.abs(theta(ctx, t) - target)
    bad = r > RESIDUAL_TOL
    if np.any(bad):
        # polish by bisection on the certified bracket
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            rm = theta(ctx, mid) - target
            lo = np.where(bad & (rm < 0), mid, lo)
            hi = np.where(bad & (rm >= 0), mid, hi)
        t = np.where(bad, 0.5 * (lo + hi), t)
        r = np.abs(theta(ctx, t) - target)
        if np.any(r > RESIDUAL_TOL):
            j = int(np.argmax(r))
            raise NumericError("Gram point residual above tolerance", v=int(vs[j]), t=float(t[j]), residual=float(r[j]))
    return [GramPoint(int(v), float(tv), float(rv)) for v, tv, rv in zip(vs, t, r)]


def gram_point(ctx, v):
    return gram_points(ctx, [v])[0]


def gram_count(ctx, T):
    """Number of Gram points ``t_v <= T`` with ``v >= v0``."""
    v0, t_min = v0_and_tmin(ctx)
    if T < t_min:
        return 0
    return max(0, math.floor(theta(ctx, T) / math.pi) - v0 + 1)


def gram_points_in(ctx, T1, T2, parity="all"):
    """Gram points with ``T1 < t_v <= T2`` of the given index parity, ascending."""
    v0, t_min = v0_and_tmin(ctx)
    if not t_min < T1 < T2:
        raise DomainError(f"need t_min = {t_min:g} < T1 < T2")
    if parity not in ("even", "odd", "all"):
        raise DomainError("parity must be even, odd or all")
    v_lo = max(v0, math.floor(theta(ctx, T1) / math.pi))
    v_hi = math.floor(theta(ctx, T2) / math.pi) + 1
    pts = [p for p in gram_points(ctx, np.arange(v_lo, v_hi + 1)) if T1 < p.t <= T2]
    if parity == "even":
        pts = [p for p in pts if p.v % 2 == 0]
    elif parity == "odd":
        pts = [p for p in pts if p.v % 2 == 1]
    return pts
