"""Numerical replay of the contour-integral proof of the Gram-point mean value.

``G(s) = -(i/2) cot((i/4) log Delta(s))`` has simple poles at ``k/2 + i t_v`` for
even ``v`` with residue ``1/theta'(t_v)``; ``H(s) = (i/2) tan((i/4) log Delta(s))``
has them at odd ``v``.  Integrating ``G Delta^(-1/2) L`` around a rectangle
whose horizontal sides sit at odd Gram ordinates gives the weighted sum of Z
at the enclosed even Gram points.  The module also evaluates the oscillatory
integrals ``I(n)`` behind the main term and checks ``L`` against an
independent incomplete-gamma expansion.
"""
from dataclasses import dataclass, field
import cmath
import json
import math
import os

import numpy as np

from .errors import ConfigurationError, DomainError, NumericError
from .gram import gram_point, gram_points, gram_points_in, v0_and_tmin
from .lfunc import MAX_T, l_direct, l_eval, l_values, log_delta, log_delta_deriv, theta_prime, z_values
from .quadrature import adaptive_quad
from .special import log_gamma, upper_incomplete_gamma

__all__ = [
    "VerificationRecord",
    "g_aux",
    "h_aux",
    "aux_approximation_profile",
    "residue_at_even_gram",
    "residue_by_circle",
    "rectangle_check",
    "contour_residue_check",
    "vertical_symmetry_check",
    "stationary_phase_In",
    "karatsuba_main_term",
    "karatsuba_error_budget",
    "fit_regime_constants",
    "afe_crosscheck",
    "afe_value",
    "run_suite",
    "write_report",
]

POLE_GUARD = 1e-6
CONTOUR_MAX_T = 200.0
AFE_MAX_T = 500.0
AFE_MARGIN = 6.5
CONTOUR_NOISE = 1e-12  # relative accuracy of the L values on the contour


@dataclass(frozen=True)
class VerificationRecord:
    name: str
    lhs: complex
    rhs: complex
    abs_discrepancy: float
    rel_discrepancy: float
    params: dict = field(default_factory=dict)

    @classmethod
    def from_sides(cls, name, lhs, rhs, **params):
        lhs, rhs = complex(lhs), complex(rhs)
        diff = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel = diff / scale if scale > 0 else 0.0
        return cls(name, lhs, rhs, diff, rel, dict(params))

    def as_dict(self):
        return {
            "name": self.name,
            "params": self.params,
            "lhs": {"re": self.lhs.real, "im": self.lhs.imag},
            "rhs": {"re": self.rhs.real, "im": self.rhs.imag},
            "abs_discrepancy": self.abs_discrepancy,
            "rel_discrepancy": self.rel_discrepancy,
        }


def write_report(records, path):
    """Write records as a JSON array (atomic replace)."""
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump([r.as_dict() for r in records], fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


# -- auxiliary functions --------------------------------------------------------

def _cot(w):
    # stable for large |Im w| in either direction
    up = w.imag >= 0
    e = np.exp(np.where(up, 2j * w, -2j * w))
    return np.where(up, 1j * (e + 1) / (e - 1), 1j * (1 + e) / (1 - e))


def _aux(ctx, s, kind):
    z = np.asarray(s, dtype=complex)
    w = 0.25j * np.asarray(log_delta(ctx, z))
    shift = 0.0 if kind == "G" else 0.5 * math.pi
    m = np.round((w.real - shift) / math.pi)
    gap = np.abs(w - shift - m * math.pi)
    speed = np.abs(0.25 * np.asarray(log_delta_deriv(ctx, z)))
    near = gap < POLE_GUARD * speed
    if np.any(near):
        j = np.flatnonzero(np.ravel(near))[0]
        mj = int(np.ravel(m)[j])
        v = 2 * mj if kind == "G" else 2 * mj + 1
        raise DomainError(f"{kind} evaluated within {POLE_GUARD:g} of its pole at Gram index {v}")
    if kind == "G":
        out = -0.5j * _cot(w)
    else:
        out = 0.5j / _cot(w)
    return complex(out) if np.ndim(s) == 0 and not isinstance(s, np.ndarray) else out


def g_aux(ctx, s):
    """``G(s) = -(i/2) cot((i/4) log Delta(s))``; poles at even Gram ordinates."""
    return _aux(ctx, s, "G")


def h_aux(ctx, s):
    """``H(s) = (i/2) tan((i/4) log Delta(s))``; poles at odd Gram ordinates."""
    return _aux(ctx, s, "H")


def aux_approximation_profile(ctx, ts, kind="G", c=None):
    """``|X Delta^(-1/2) - (Delta^(-1/2)/2 +- 1)|`` along ``sigma = k/2 + c``.

    Returns ``(values, slope)``; ``slope`` is the least-squares exponent of the
    decay in ``t``, which should be close to ``-c``.
    """
    c = ctx.c if c is None else c
    ts = np.asarray(ts, dtype=float)
    s = ctx.weight / 2 + c + 1j * ts
    half = np.exp(-0.5 * np.asarray(log_delta(ctx, s)))
    if kind == "G":
        vals = np.abs(g_aux(ctx, s) * half - (half / 2 + 1))
    else:
        vals = np.abs(h_aux(ctx, s) * half - (half / 2 - 1))
    slope = float(np.polyfit(np.log(ts), np.log(vals), 1)[0]) if ts.size > 1 else float("nan")
    return vals, slope


def residue_at_even_gram(ctx, v):
    """``1 / theta'(t_v)`` for an even Gram index ``v``."""
    if v % 2:
        raise DomainError("residues of G sit at even Gram indices")
    v0, _ = v0_and_tmin(ctx)
    if v < v0:
        raise DomainError(f"Gram index {v} below v0 = {v0}")
    return 1.0 / theta_prime(ctx, gram_point(ctx, v).t)


def residue_by_circle(ctx, v, radius=1e-2, nodes=256, kind="G"):
    """``(1/2 pi i) \\oint X(s) ds`` on a circle around ``k/2 + i t_v`` (trapezoid rule)."""
    centre = ctx.weight / 2 + 1j * gram_point(ctx, v).t
    phi = 2 * math.pi * np.arange(nodes) / nodes
    offset = radius * np.exp(1j * phi)
    vals = _aux(ctx, centre + offset, kind)
    return complex(np.mean(vals * offset))


# -- rectangle contour --------------------------------------------------------

def _integrand(ctx):
    def h(s):
        s = np.asarray(s, dtype=complex)
        L, _ = l_values(ctx, s)
        return g_aux(ctx, s) * np.exp(-0.5 * np.asarray(log_delta(ctx, s))) * L
    return h


def _segment(f, a, b, spacing, nodes, tol):
    panels = max(1, int(math.ceil(abs(b - a) / spacing)))
    value, _ = adaptive_quad(f, complex(a), complex(b), tol=tol, m=nodes, initial=panels, noise=CONTOUR_NOISE)
    return value


def _contour_sides(ctx, T0, T1, c, nodes, tol):
    k = ctx.weight
    f = _integrand(ctx)
    spacing = 0.5 * math.pi / math.log(max(T1, 2 * math.pi * math.e) / (2 * math.pi))
    lo, hi = k / 2 - c, k / 2 + c
    corners = [lo + 1j * T0, hi + 1j * T0, hi + 1j * T1, lo + 1j * T1]
    sides = {}
    for name, (a, b) in zip(("bottom", "right", "top", "left"), zip(corners, corners[1:] + corners[:1])):
        sides[name] = _segment(f, a, b, spacing, nodes, tol)
    return sides


def rectangle_check(ctx, T0, T1, c=None, nodes=20, tol=1e-11):
    """Residue sum vs contour integral on ``[k/2 - c, k/2 + c] x [T0, T1]``.

    ``T0`` and ``T1`` should avoid the even Gram ordinates (the poles).
    """
    c = ctx.c if c is None else c
    _, t_min = v0_and_tmin(ctx)
    if not t_min < T0 < T1 <= MAX_T:
        raise DomainError("rectangle must lie in (t_min, 2000]")
    pts = gram_points_in(ctx, T0, T1, "even")
    if pts and pts[-1].t == T1:
        raise DomainError("top side passes through a pole")
    t = np.array([p.t for p in pts])
    lhs = 0.0
    if t.size:
        Z, _, _ = z_values(ctx, t)
        lhs = math.fsum(Z / theta_prime(ctx, t))
    sides = _contour_sides(ctx, T0, T1, c, nodes, tol)
    total = sides["bottom"] + sides["right"] + sides["top"] + sides["left"]
    rhs = total / (2j * math.pi)
    return VerificationRecord.from_sides(
        "contour", lhs, rhs, T0=T0, T1=T1, c=c, nodes=nodes, poles=len(pts)
    )


def _bracket(ctx, T):
    evens = gram_points_in(ctx, T, 2 * T, "even")
    if not evens:
        raise DomainError(f"no even-index Gram point in ({T:g}, {2 * T:g}]")
    lo, hi = gram_points(ctx, [evens[0].v - 1, evens[-1].v + 1])
    return lo.t, hi.t, len(evens)


def contour_residue_check(ctx, T, c=None, nodes=20, tol=1e-11):
    """Contour identity for the even Gram points in ``(T, 2T]``, ``T <= 200``.

    The horizontal sides sit at the odd Gram ordinates just outside the first
    and last even point of the window.
    """
    if T > CONTOUR_MAX_T:
        raise DomainError(f"contour check limited to T <= {CONTOUR_MAX_T:g}")
    T0, T1, _ = _bracket(ctx, T)
    rec = rectangle_check(ctx, T0, T1, c, nodes, tol)
    rec.params["T"] = T
    return rec


def vertical_symmetry_check(ctx, T, c=None, nodes=20, tol=1e-11):
    """The left side integral equals ``-conj`` of the right side integral.

    ``h(s) = G Delta^(-1/2) L`` satisfies ``h(s) = -conj(h(k - conj s))``, so with
    the contour orientation ``int_left = -conj(int_right)`` exactly.
    """
    c = ctx.c if c is None else c
    T0, T1, _ = _bracket(ctx, T)
    sides = _contour_sides(ctx, T0, T1, c, nodes, tol)
    return VerificationRecord.from_sides(
        "vertical_symmetry", sides["left"], -np.conj(sides["right"]), T=T, T0=T0, T1=T1, c=c
    )


# -- stationary phase -----------------------------------------------------------

def stationary_phase_In(ctx, n, T_hat, c=None, rtol=1e-10):
    """``I(n) = int_T^2T t^c exp(2 pi i t log(t/(e n))) dt`` with ``T = T_hat``.

    Returns ``(value, error_estimate)``; the estimate must be below ``1e-8``
    relative or ``NumericError`` is raised.
    """
    if ctx is not None and c is None:
        c = ctx.c
    if c is None:
        raise ConfigurationError("exponent c required")
    if T_hat < 10 or n < 1:
        raise DomainError("need T_hat >= 10 and n >= 1")
    a, b = float(T_hat), 2.0 * T_hat
    log_en = math.log(n) + 1.0

    def f(t):
        return t ** c * np.exp(2j * math.pi * t * (np.log(t) - log_en))

    # total phase variation sets the starting panel count (about one radian per node)
    phase = abs(2 * math.pi * ((b * (math.log(b) - log_en)) - (a * (math.log(a) - log_en))))
    turn = 2 * math.pi * (b - a) * max(abs(math.log(a / n)), abs(math.log(b / n)))
    panels = int(max(phase, turn) / 10) + 8
    value, err = adaptive_quad(f, a, b, tol=0.0, rtol=rtol, m=20, initial=panels)
    if err > 1e-8 * abs(value):
        raise NumericError("oscillatory quadrature missed its tolerance", n=n, T_hat=T_hat, err=err, value=abs(value))
    return value, err


def karatsuba_main_term(n, c):
    """``n^(c + 1/2) exp(-2 pi i n + pi i/4)``; the first factor is 1 for integer n."""
    frac = n - round(n)
    return n ** (c + 0.5) * cmath.exp(1j * (-2 * math.pi * frac + math.pi / 4))


def karatsuba_error_budget(n, T_hat, c):
    """``H A/U + H min(1/|F'(a)|, sqrt A) + H min(1/|F'(b)|, sqrt A)``.

    ``H = T^c`` bounds ``t^c`` on ``[T, 2T]`` up to the constant ``2^c``,
    ``A = T`` bounds ``1/F''`` and ``U = 2T`` is the length scale.
    """
    H, A, U = T_hat ** c, float(T_hat), 2.0 * T_hat
    fa = abs(math.log(T_hat / n))
    fb = abs(math.log(2 * T_hat / n))
    left = min(1 / fa if fa > 0 else math.inf, math.sqrt(A))
    right = min(1 / fb if fb > 0 else math.inf, math.sqrt(A))
    return H * A / U + H * left + H * right


def _regime_samples(T_hat, d):
    edge = T_hat ** d
    first = sorted({max(1, int(x)) for x in np.linspace(1, T_hat - edge, 10)})
    second = sorted({int(round(x)) for x in np.linspace(T_hat - edge, T_hat + edge, 9)} - {0})
    return first, second


def fit_regime_constants(ctx, T_hats=(50.0, 100.0, 200.0), c=None, d=None):
    """Fitted constants of the first- and second-derivative regimes.

    First regime ``n <= T - T^d``: ``C1 = max |I(n)| / T^(c + 1 - d)``.
    Second regime ``|n - T| <= T^d``: ``C2 = max |I(n)| / T^(c + 1/2)``.
    Returns ``{"first": [...], "second": [...], "T_hat": [...]}``.
    """
    c = ctx.c if c is None else c
    d = ctx.d if d is None else d
    out = {"T_hat": list(T_hats), "first": [], "second": []}
    for T in T_hats:
        first, second = _regime_samples(T, d)
        i1 = max(abs(stationary_phase_In(ctx, n, T, c)[0]) for n in first)
        i2 = max(abs(stationary_phase_In(ctx, n, T, c)[0]) for n in second)
        out["first"].append(i1 / T ** (c + 1 - d))
        out["second"].append(i2 / T ** (c + 0.5))
    return out


# -- incomplete-gamma cross-check -------------------------------------------------

def afe_value(ctx, s):
    """``L(s)`` from the rotated incomplete-gamma expansion of the completed L-function.

    With ``delta = exp(i beta)``, ``beta = pi/2 - min(pi/2, 6.5/|t|)``,

        Lambda(s) delta^(-s) = sum a(n) [ x^(-s) Gamma(s, x)
                                         + (i delta)^(-k) xb^(s-k) Gamma(k-s, xb) ]

    where ``x = 2 pi n delta`` and ``xb = conj(x)``.  For ``beta = 0`` this is
    the classical unrotated expansion.
    """
    s = complex(s)
    k = ctx.weight
    if abs(s.imag) > AFE_MAX_T:
        raise DomainError(f"AFE cross-check validated for |Im s| <= {AFE_MAX_T:g}")
    if not 0 < s.real < k:
        raise DomainError(f"Re(s) must lie in (0, {k})")
    if s.imag < 0:
        return afe_value(ctx, s.conjugate()).conjugate()
    t = s.imag
    eps = min(math.pi / 2, AFE_MARGIN / t) if t > 0 else math.pi / 2
    beta = math.pi / 2 - eps
    delta = cmath.exp(1j * beta)
    rot = (1j * delta) ** (-k)
    a = ctx._float_coeffs
    terms = []
    total = 0j
    for n in range(1, a.size + 1):
        x = 2 * math.pi * n * delta
        term = a[n - 1] * (upper_incomplete_gamma(s, x, scaled=True)
                           + rot * upper_incomplete_gamma(k - s, x.conjugate(), scaled=True))
        terms.append(term)
        total += term
        if n > 5 and 2 * math.pi * n * math.cos(beta) > 60 and abs(term) < 1e-18 * abs(total):
            break
    else:
        raise ConfigurationError(f"AFE at t = {t:g} did not converge within {a.size} coefficients")
    arr = np.array(terms)
    J = complex(math.fsum(arr.real), math.fsum(arr.imag))
    return cmath.exp(s * math.log(2 * math.pi) - log_gamma(s) + 1j * beta * s) * J


def afe_crosscheck(ctx, s):
    s = complex(s)
    lhs = l_eval(ctx, s).value
    rhs = afe_value(ctx, s)
    return VerificationRecord.from_sides("afe", lhs, rhs, sigma=s.real, t=s.imag)


# -- suites -------------------------------------------------------------------------

def run_suite(ctx, suite="all", T=30.0):
    """Records for ``contour``, ``symmetry``, ``residue``, ``afe``, ``stationary`` or ``all``."""
    known = ("contour", "symmetry", "residue", "afe", "stationary", "all")
    if suite not in known:
        raise DomainError(f"unknown suite {suite!r}; choose from {', '.join(known)}")
    recs = []
    if suite in ("contour", "all"):
        recs.append(contour_residue_check(ctx, T))
    if suite in ("symmetry", "all"):
        recs.append(vertical_symmetry_check(ctx, T))
    if suite in ("residue", "all"):
        for p in gram_points_in(ctx, T, 2 * T, "even")[:3]:
            recs.append(VerificationRecord.from_sides(
                "residue", residue_at_even_gram(ctx, p.v), residue_by_circle(ctx, p.v), v=p.v, t=p.t))
    if suite in ("afe", "all"):
        k = ctx.weight
        for s in (k / 2 + 0j, k / 2 + 25j, 8.5 + 0j, k / 2 + 1j * T):
            recs.append(afe_crosscheck(ctx, s))
        recs.append(VerificationRecord.from_sides("l_direct", l_eval(ctx, 8.5).value, l_direct(ctx, 8.5).value, sigma=8.5, t=0.0))
    if suite in ("stationary", "all"):
        c = ctx.c
        for T_hat in (50.0, 100.0, 200.0):
            n = int(1.5 * T_hat)
            val, _ = stationary_phase_In(ctx, n, T_hat, c)
            recs.append(VerificationRecord.from_sides(
                "stationary_phase", val, karatsuba_main_term(n, c), n=n, T_hat=T_hat, c=c,
                budget=karatsuba_error_budget(n, T_hat, c)))
    return recs
