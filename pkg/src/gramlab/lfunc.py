"""Hecke L-function, the factor Delta of its functional equation, theta and Z.

Conventions for a weight-``k`` eigenform ``f(z) = sum a(n) e^(2 pi i n z)``:

    L(s) = sum a(n) n^(-s),      L(s) = Delta(s) L(k - s),
    log Delta(s) = k pi i/2 + (2s - k) log 2pi + log Gamma(k - s) - log Gamma(s),
    theta(t) = (i/2) log Delta(k/2 + it),     Z(t) = e^(i theta(t)) L(k/2 + it).

``L`` is evaluated anywhere in the strip ``0 < Re(s) < k`` with
``|Im(s)| <= 2000`` from a rotated-contour integral of the completed
L-function (see ``_kernel``).  Rules are built per dyadic band of ``|t|`` on
first use and memoised on the context.
"""
from dataclasses import dataclass, field, replace
import math
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import _kernel
from .coeffs import FourierCoefficients, divisor_bound_constant, tau_coefficients
from .errors import ConfigurationError, DomainError, NumericError
from .special import digamma, log_gamma

__all__ = [
    "LContext",
    "EvalResult",
    "make_context",
    "log_delta",
    "log_delta_asymptotic",
    "log_delta_deriv",
    "log_delta_deriv_asymptotic",
    "delta_pow",
    "theta",
    "theta_prime",
    "theta_asymptotic",
    "theta_prime_asymptotic",
    "f_upper_half",
    "l_direct",
    "l_eval",
    "l_values",
    "z_eval",
    "z_values",
    "z_tolerance",
    "convexity_profile",
]

MAX_T = 2000.0
DEFAULT_COUNT = 4000
ASYMPTOTIC_MIN_T = 10.0
THETA_RESIDUAL_TOL = 1e-10
Z_REL_TOL = 1e-8
CALIBRATION_PHASE = 0.5  # refined rule uses half the panel phase
LOG_2PI = math.log(2 * math.pi)
_TAIL_ETA = 0.25


@dataclass(frozen=True)
class EvalResult:
    """A value with an a posteriori absolute error estimate."""

    value: complex
    est_error: float

    def ok(self, tol):
        return self.est_error <= tol

    def __complex__(self):
        return complex(self.value)


@dataclass(frozen=True, eq=False)
class LContext:
    """Immutable evaluation context.

    ``quad_tol`` is the accuracy target of the quadrature relative to the
    L1 mass of the integrand.  ``tail_cut`` is the cutoff ``u`` of the
    coefficient sums: terms with ``2 pi n y cos(beta) > u`` are dropped.  By
    default it is chosen so that dropped terms are below ``1e-6 * quad_tol``
    of the peak.  ``c`` and ``d`` are the strip half-width and the
    stationary-phase split exponent used by the verification code.
    """

    coefficients: FourierCoefficients
    quad_tol: float = 1e-12
    c: float = 0.5001
    d: float = 0.75
    tail_cut: float = None
    weight: int = None
    _rules: dict = field(default_factory=dict, init=False, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.coefficients, FourierCoefficients):
            raise ConfigurationError("coefficients must be a FourierCoefficients table")
        k = self.coefficients.weight
        if self.weight is None:
            object.__setattr__(self, "weight", k)
        elif self.weight != k:
            raise ConfigurationError(f"context weight {self.weight} != coefficient weight {k}")
        if not 1e-14 <= self.quad_tol <= 1e-6:
            raise ConfigurationError(f"quad_tol = {self.quad_tol:g} outside [1e-14, 1e-6]")
        if not 0.5 < self.c < k / 2:
            raise ConfigurationError(f"c = {self.c} outside (1/2, k/2)")
        if not 0.0 < self.d < 1.0:
            raise ConfigurationError(f"d = {self.d} outside (0, 1)")
        if self.tail_cut is None:
            object.__setattr__(self, "tail_cut", _kernel.cutoff_product(k - 1, 1e-6 * self.quad_tol))
        elif not self.tail_cut > k:
            raise ConfigurationError(f"tail_cut must exceed the weight {k}")
        object.__setattr__(self, "_float_coeffs", self.coefficients.values)

    def max_t(self):
        """Largest ``|t|`` the coefficient table supports, capped at 2000."""
        j = int(_kernel.band_index(MAX_T))
        while j >= 0 and _kernel.required_count(self.weight, j, self.tail_cut) > self.coefficients.count:
            j -= 1
        return 0.0 if j < 0 else min(MAX_T, _kernel.band_top(j))

    def memo(self, key, build):
        """Value of ``build()`` computed once per context under ``key``."""
        value = self._rules.get(key)
        if value is not None:
            return value
        with self._lock:
            value = self._rules.get(key)
            if value is None:
                value = build()
                self._rules[key] = value
        return value

    def rule(self, index):
        """Calibrated quadrature rule of band ``index`` (built once)."""
        return self.memo(("band", index), lambda: self._build(index))

    def _build(self, index):
        need = _kernel.required_count(self.weight, index, self.tail_cut)
        if need > self.coefficients.count:
            raise ConfigurationError(
                f"|t| up to {_kernel.band_top(index):g} needs {need} coefficients, "
                f"table has {self.coefficients.count}"
            )
        a = self._float_coeffs
        k = self.weight
        rule = _kernel.build_rule(a, k, index, self.tail_cut)
        fine = _kernel.build_rule(a, k, index, self.tail_cut, phase=CALIBRATION_PHASE * _kernel.PANEL_PHASE)
        t_hi = rule.t_hi
        t_lo = 0.0 if index == 0 else t_hi / 2
        ts = np.array([t_lo, 0.5 * (t_lo + t_hi), t_hi])
        sig = np.array([0.1, 1.0, k / 2, k - 1.0, k - 0.1])
        s = (sig[:, None] + 1j * ts[None, :]).ravel()
        coarse, mass = _kernel.integral(rule, s, k)
        ref, _ = _kernel.integral(fine, s, k)
        rel = float(np.max(np.abs(coarse - ref) / mass))
        return replace(rule, quad_rel_error=rel)


def make_context(coefficients=None, count=DEFAULT_COUNT, quad_tol=1e-12, c=0.5001, d=0.75, tail_cut=None):
    """Context for ``coefficients``, or for the discriminant form with ``count`` terms."""
    if coefficients is None:
        coefficients = tau_coefficients(count)
    return LContext(coefficients, quad_tol=quad_tol, c=c, d=d, tail_cut=tail_cut)


# -- Delta and theta -----------------------------------------------------------

def _strip(ctx, s):
    z = np.asarray(s, dtype=complex)
    if np.any(~((z.real > 0) & (z.real < ctx.weight))):
        raise DomainError(f"Re(s) must lie in (0, {ctx.weight})")
    return z


def _out(result, s):
    return complex(result) if np.ndim(s) == 0 and not isinstance(s, np.ndarray) else result


def log_delta(ctx, s):
    """The holomorphic branch of ``log Delta(s)`` on the strip."""
    z = _strip(ctx, s)
    k = ctx.weight
    out = 0.5j * k * math.pi + (2 * z - k) * LOG_2PI + log_gamma(k - z) - log_gamma(z)
    return _out(out, s)


def _asym_t(ctx, s):
    z = _strip(ctx, s)
    if np.any(z.imag < ASYMPTOTIC_MIN_T):
        raise DomainError(f"asymptotic forms need Im(s) >= {ASYMPTOTIC_MIN_T:g}")
    return z


def log_delta_asymptotic(ctx, s):
    """``(k - 2 sigma) log(t/2pi) - 2it log(t/(2 pi e)) + pi i/2``."""
    z = _asym_t(ctx, s)
    t = z.imag
    out = (ctx.weight - 2 * z.real) * np.log(t / (2 * math.pi)) - 2j * t * np.log(t / (2 * math.pi * math.e)) + 0.5j * math.pi
    return _out(out, s)


def log_delta_deriv(ctx, s):
    """``d/ds log Delta(s) = 2 log 2pi - psi(k - s) - psi(s)``."""
    z = _strip(ctx, s)
    out = 2 * LOG_2PI - digamma(ctx.weight - z) - digamma(z)
    return _out(out, s)


def log_delta_deriv_asymptotic(ctx, s):
    """``-2 log(t/2pi) - i(k - 2 sigma)/t``."""
    z = _asym_t(ctx, s)
    t = z.imag
    out = -2 * np.log(t / (2 * math.pi)) - 1j * (ctx.weight - 2 * z.real) / t
    return _out(out, s)


def delta_pow(ctx, s, z):
    """``Delta(s)^z = exp(z log Delta(s))``."""
    w = np.asarray(z, dtype=complex) * log_delta(ctx, np.asarray(s, dtype=complex))
    out = np.exp(w)
    scalar = np.ndim(s) == 0 and np.ndim(z) == 0
    return complex(out) if scalar else out


def theta(ctx, t, with_residual=False):
    """``theta(t)``; with ``with_residual`` also the discarded imaginary part."""
    tt = np.asarray(t, dtype=float)
    val = 0.5j * np.asarray(log_delta(ctx, ctx.weight / 2 + 1j * tt))
    re, resid = val.real, np.abs(val.imag)
    if np.ndim(t) == 0:
        re, resid = float(re), float(resid)
    return (re, resid) if with_residual else re


def theta_prime(ctx, t):
    """``theta'(t) = -(1/2) d/ds log Delta(k/2 + it)``, real part."""
    tt = np.asarray(t, dtype=float)
    val = -0.5 * np.asarray(log_delta_deriv(ctx, ctx.weight / 2 + 1j * tt)).real
    return float(val) if np.ndim(t) == 0 else val


def theta_asymptotic(t):
    t = np.asarray(t, dtype=float)
    out = t * np.log(t / (2 * math.pi * math.e)) - math.pi / 4
    return float(out) if out.ndim == 0 else out


def theta_prime_asymptotic(t):
    t = np.asarray(t, dtype=float)
    out = np.log(t / (2 * math.pi))
    return float(out) if out.ndim == 0 else out


# -- series --------------------------------------------------------------------

def _power_tail(p, a, m):
    """Bound for ``sum_{n > m} n^p e^(-a n)`` once the terms decrease."""
    ratio = (1 + 1 / (m + 1)) ** p * math.exp(-a)
    if m + 1 <= p / a or ratio >= 1:
        return math.inf
    return (m + 1) ** p * math.exp(-a * (m + 1)) / (1 - ratio)


def f_upper_half(ctx, y):
    """``f(iy) = sum a(n) e^(-2 pi n y)`` for ``y >= 1/2``.

    Summation stops once the Deligne tail bound ``sum d(n) n^((k-1)/2) e^(-2 pi n y)``
    is below ``quad_tol * e^(-2 pi y)``.
    """
    y = float(y)
    if not y >= 0.5:
        raise DomainError("f_upper_half needs y >= 1/2")
    k = ctx.weight
    p = (k - 1) / 2 + _TAIL_ETA
    const = divisor_bound_constant(_TAIL_ETA)
    a = 2 * math.pi * y
    goal = ctx.quad_tol * math.exp(-a)
    m = 1
    while const * _power_tail(p, a, m) > goal:
        m += 1
        if m > ctx.coefficients.count:
            need = m
            while const * _power_tail(p, a, need) > goal:
                need += 1
            raise ConfigurationError(f"f(iy) at y = {y:g} needs {need} coefficients, table has {ctx.coefficients.count}")
    n = np.arange(1, m + 1)
    terms = ctx._float_coeffs[:m] * np.exp(-a * n)
    return math.fsum(terms)


def _divisor_sum_tail(alpha, m):
    # sum_{n>m} d(n) n^-alpha <= alpha int_m^inf x (log x + 1) x^(-alpha-1) dx  (alpha > 1)
    lm = math.log(m)
    b = alpha - 1
    return alpha * m ** (-b) * ((lm + 1) / b + 1 / b**2)


def l_direct(ctx, s):
    """Truncated Dirichlet series, valid for ``Re(s) >= (k+1)/2 + 1/2``."""
    s = complex(s)
    k = ctx.weight
    if s.real < (k + 1) / 2 + 0.5:
        raise DomainError(f"Dirichlet series used only for Re(s) >= {(k + 1) / 2 + 0.5:g}")
    N = ctx.coefficients.count
    n = np.arange(1, N + 1, dtype=float)
    terms = ctx.coefficients.normalized * np.exp(-(s - (k - 1) / 2) * np.log(n))
    value = complex(math.fsum(terms.real), math.fsum(terms.imag))
    tail = _divisor_sum_tail(s.real - (k - 1) / 2, N)
    return EvalResult(value, tail + 4 * N * 2.2e-16 * float(np.sum(np.abs(terms))))


# -- integral evaluation -----------------------------------------------------------

def _validate_points(ctx, s):
    z = np.asarray(s, dtype=complex).ravel()
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite argument")
    if np.any(~((z.real > 0) & (z.real < ctx.weight))):
        raise DomainError(f"Re(s) must lie in (0, {ctx.weight})")
    if np.any(np.abs(z.imag) > MAX_T):
        bad = z[np.abs(z.imag) > MAX_T][0]
        raise DomainError(f"|Im(s)| = {abs(bad.imag):g} exceeds the validated range {MAX_T:g}")
    return z


def l_values(ctx, s, workers=1):
    """``L(s)`` and absolute error estimates for an array of points.

    Points are grouped by band and cut into fixed blocks; ``workers > 1``
    evaluates the blocks in a thread pool.  Results do not depend on
    ``workers``.
    """
    shape = np.shape(s)
    z = _validate_points(ctx, s)
    flip = z.imag < 0
    w = np.where(flip, np.conj(z), z)
    bands = _kernel.band_index(w.imag)
    values = np.empty(z.size, dtype=complex)
    errors = np.empty(z.size)

    # fixed block decomposition: results are identical for any worker count
    tasks = []
    for index in sorted(set(bands.tolist())):
        rule = ctx.rule(int(index))
        idx = np.flatnonzero(bands == index)
        rows = max(1, _kernel.EVAL_CHUNK // rule.size)
        tasks.extend((rule, idx[i:i + rows]) for i in range(0, idx.size, rows))

    def run(task):
        rule, idx = task
        J, mass = _kernel.integral(rule, w[idx], ctx.weight)
        logpre = w[idx] * LOG_2PI - log_gamma(w[idx]) + 1j * rule.beta * w[idx]
        pre = np.exp(logpre)
        values[idx] = pre * J
        errors[idx] = np.abs(pre) * mass * _kernel.error_scale(rule)

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, tasks))
    else:
        for task in tasks:
            run(task)
    values = np.where(flip, np.conj(values), values)
    return values.reshape(shape), errors.reshape(shape)


def l_eval(ctx, s):
    """``L(s)`` for ``0 < Re(s) < k``, ``|Im(s)| <= 2000``."""
    v, e = l_values(ctx, np.array([complex(s)]))
    if not (np.isfinite(v[0]) and np.isfinite(e[0])):
        raise NumericError("non-finite L value", s=complex(s))
    return EvalResult(complex(v[0]), float(e[0]))


def z_tolerance(z):
    return np.maximum(Z_REL_TOL, Z_REL_TOL * np.abs(z))


def z_values(ctx, t, workers=1, check=True):
    """``Z(t)`` with the discarded imaginary parts and error estimates.

    With ``check`` a residual or error estimate above ``max(1e-8, 1e-8 |Z|)``
    raises ``NumericError`` naming the first offending ``t``.
    """
    tt = np.asarray(t, dtype=float)
    s = ctx.weight / 2 + 1j * tt
    L, err = l_values(ctx, s, workers=workers)
    th = theta(ctx, tt)
    prod = np.exp(1j * th) * L
    Z, resid = prod.real, prod.imag
    if check:
        bound = z_tolerance(Z)
        bad = (np.abs(resid) > bound) | (err > bound)
        if np.any(bad):
            j = np.flatnonzero(np.ravel(bad))[0]
            raise NumericError(
                "Z is not real to tolerance",
                t=float(np.ravel(tt)[j]), z=float(np.ravel(Z)[j]),
                imag=float(np.ravel(resid)[j]), est_error=float(np.ravel(err)[j]),
            )
    return Z, resid, err


def z_eval(ctx, t):
    """Real value ``Z(t)``; raises ``NumericError`` if not real to tolerance."""
    Z, _, _ = z_values(ctx, np.array([float(t)]))
    return float(Z[0])


def convexity_profile(ctx, ts, c=None):
    """``max_t |Delta^(-1/2) L| t^(-c)`` on ``sigma = k/2 - c, k/2, k/2 + c``.

    Returns a dict keyed by sigma; the bound has no explicit constant so the
    profile is reported rather than asserted.
    """
    c = ctx.c if c is None else c
    ts = np.asarray(ts, dtype=float)
    out = {}
    for sigma in (ctx.weight / 2 - c, ctx.weight / 2, ctx.weight / 2 + c):
        s = sigma + 1j * ts
        L, _ = l_values(ctx, s)
        scaled = np.abs(np.exp(-0.5 * log_delta(ctx, s)) * L) * ts ** (-c)
        out[float(sigma)] = float(np.max(scaled))
    return out
