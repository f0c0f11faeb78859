"""Banded quadrature rules for the completed L-function integral.

For ``delta = exp(i beta)`` with ``0 <= beta < pi/2`` the modular
transformation of ``f`` gives, for every ``s`` in the strip,

    Lambda(s) delta^(-s) = int_1^inf [ f(i delta y) y^(s-1)
                                      + (i delta)^(-k) f(i conj(delta) y) y^(k-s-1) ] dy

with ``Lambda(s) = (2 pi)^(-s) Gamma(s) L(s)``.  On the real axis
(``beta = 0``) the integral is of size ``exp(-pi |t| / 2)`` while the
integrand is O(1), so double precision is exhausted near ``t = 10``.  Rotating
by ``beta = pi/2 - ROTATION_MARGIN / t_hi`` leaves a loss of only
``exp(ROTATION_MARGIN)`` and keeps every quantity representable.

One rule is built per dyadic band of ``|t|``.  Nodes, weights and the
values ``f(i delta y_j)`` are fixed per band, so evaluating ``L`` at many
points of one band costs one complex exponential per node and point.
"""
from dataclasses import dataclass
import math

import numpy as np

from .quadrature import panel_rule

ROTATION_MARGIN = 6.5
BASE_BAND = 4.0
PANEL_NODES = 24
PANEL_PHASE = 40.0  # complex frequency times panel width
EVAL_CHUNK = 2_000_000  # matrix entries per evaluation block
_EPS = 2.220446049250313e-16


def band_index(t_abs):
    t_abs = np.asarray(t_abs, dtype=float)
    ratio = np.maximum(t_abs, BASE_BAND) / BASE_BAND
    return np.ceil(np.log2(ratio) - 1e-12).astype(int)


def band_top(index):
    return BASE_BAND * 2.0 ** index


def cutoff_product(power, threshold):
    # smallest u > power with u^power e^-u <= threshold * peak
    target = power * math.log(power) - power + math.log(threshold)
    lo, hi = float(power), float(power) + 10.0
    while power * math.log(hi) - hi > target:
        hi *= 1.5
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if power * math.log(mid) - mid > target:
            lo = mid
        else:
            hi = mid
    return hi


@dataclass(frozen=True)
class BandRule:
    """Quadrature rule for one band ``|t| <= t_hi``."""

    t_hi: float
    beta: float
    nodes: np.ndarray
    weights: np.ndarray
    log_nodes: np.ndarray
    f_values: np.ndarray  # f(i delta y_j)
    product_cut: float
    threshold: float
    quad_rel_error: float = 0.0

    @property
    def size(self):
        return self.nodes.size


def _f_rotated(coeffs, nodes, delta, product_cut):
    """``sum_n a(n) exp(-2 pi n delta y)`` at every node, n <= product_cut / y."""
    out = np.zeros(nodes.size, dtype=complex)
    chunk = 1024
    for i0 in range(0, nodes.size, chunk):
        y = nodes[i0:i0 + chunk]
        nmax = min(int(product_cut / y[0]) + 1, coeffs.size)
        block = max(1, int(math.isqrt(nmax)))
        nj = -(-nmax // block)
        a = np.zeros(nj * block)
        a[:nmax] = coeffs[:nmax]
        # n = 1 + r + block*j  ->  q^n = q^(1+r) * q^(block*j)
        z = -2.0 * math.pi * delta * y
        q_low = np.exp(np.outer(z, np.arange(1, block + 1)))
        q_high = np.exp(np.outer(z, block * np.arange(nj)))
        partial = q_low @ a.reshape(nj, block).T
        out[i0:i0 + chunk] = np.sum(partial * q_high, axis=1)
    return out


def cutoff_threshold(power, cut):
    """Relative size ``(u/p)^p e^(p-u)`` of ``u^p e^-u`` at ``u = cut``."""
    return math.exp(power * math.log(cut / power) + power - cut)


def required_count(weight, index, cut):
    """Coefficients needed by the rule of band ``index``."""
    eps = min(math.pi / 2, ROTATION_MARGIN / band_top(index))
    return int(cut / (2 * math.pi * math.sin(eps))) + 1


def build_rule(coeffs, weight, index, cut, phase=PANEL_PHASE, m=PANEL_NODES):
    """Construct the rule for band ``index`` from float coefficients ``a(n)``.

    Terms with ``2 pi n y cos(beta) > cut`` are dropped from ``f``.
    """
    t_hi = band_top(index)
    eps = min(math.pi / 2, ROTATION_MARGIN / t_hi)
    beta = math.pi / 2 - eps
    cos_b, sin_b = math.cos(beta), math.sin(beta)
    product_cut = cut / (2 * math.pi * cos_b)
    threshold = cutoff_threshold(weight - 1, cut)
    y_end = max(product_cut, 1.5)
    omega = t_hi + 2 * math.pi * product_cut * (sin_b + cos_b) + weight
    # geometric panels: width proportional to y / omega keeps phase per panel fixed
    ratio = 1.0 + phase / omega
    count = max(1, int(math.ceil(math.log(y_end) / math.log(ratio))))
    edges = y_end ** (np.arange(count + 1) / count)
    nodes, weights = panel_rule(edges, m)
    delta = complex(cos_b, sin_b)
    f_vals = _f_rotated(coeffs, nodes, delta, product_cut)
    for arr in (nodes, weights, f_vals):
        arr.setflags(write=False)
    logs = np.log(nodes)
    logs.setflags(write=False)
    return BandRule(t_hi, beta, nodes, weights, logs, f_vals, product_cut, threshold)


def integral(rule, s, weight):
    """``Lambda(s) delta^(-s)`` for ``Im(s) >= 0`` and the L1 mass of its integrand."""
    s = np.asarray(s, dtype=complex).ravel()
    out = np.empty(s.size, dtype=complex)
    wf = rule.weights * rule.f_values
    ck = (1j * complex(math.cos(rule.beta), math.sin(rule.beta))) ** (-weight)
    logy = rule.log_nodes
    rows = max(1, EVAL_CHUNK // max(1, rule.size))
    sig = s.real
    for i0 in range(0, s.size, rows):
        sl = slice(i0, i0 + rows)
        e = np.exp(np.outer(s[sl] - 1.0, logy))
        first = e @ wf
        # y^(k-s-1) = conj(y^(s-1)) y^(k - 2 sigma) for real y
        if np.all(sig[sl] == weight / 2):
            second = np.conj(first)
        else:
            scale = np.exp(np.outer(weight - 2.0 * sig[sl], logy))
            second = np.conj(np.sum(e * scale * wf, axis=1))
        out[sl] = first + ck * second
    # the mass depends on sigma only
    absf = rule.weights * np.abs(rule.f_values)
    uniq, inverse = np.unique(sig, return_inverse=True)
    pw = np.exp(np.outer(uniq - 1.0, logy)) + np.exp(np.outer(weight - uniq - 1.0, logy))
    mass = (pw @ absf)[inverse.ravel()]
    return out, mass


def error_scale(rule):
    """Relative error per unit integrand mass charged to every evaluation."""
    return rule.quad_rel_error + rule.threshold + 64 * _EPS
