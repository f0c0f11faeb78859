"""Complex special functions in double precision.

``log_gamma``, ``digamma`` and ``trigamma`` accept scalars or numpy arrays and
shift the argument upward until ``Re(s) >= 10`` before applying the Stirling
series.  The shift logarithms are summed with the principal branch, which keeps
the result on the standard holomorphic branch of log Gamma (real on the
positive axis, continuous off ``(-inf, 0]``) without any argument tracking.

``upper_incomplete_gamma`` is scalar-only and switches between the lower series
and Legendre's continued fraction at ``|x| = |s| + 2``.
"""
from fractions import Fraction
from functools import lru_cache
import cmath
import math

import numpy as np

from .errors import DomainError, NumericError

__all__ = [
    "bernoulli_numbers",
    "log_gamma",
    "digamma",
    "trigamma",
    "gamma",
    "upper_incomplete_gamma",
    "lower_incomplete_gamma",
]

SHIFT_TARGET = 10.0
STIRLING_TERMS = 15  # Bernoulli numbers B_2 .. B_30
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)

CF_MAX_STEPS = 500
SERIES_MAX_TERMS = 10_000
MAX_INCGAMMA_S = 2000.0
_EPS = 2.220446049250313e-16
_TINY = 1e-300


@lru_cache(maxsize=None)
def bernoulli_numbers(count):
    """Exact ``B_0 .. B_{count}`` as Fractions, ``B_1 = -1/2`` convention."""
    b = [Fraction(0)] * (count + 1)
    b[0] = Fraction(1)
    for m in range(1, count + 1):
        acc = Fraction(0)
        binom = 1
        for j in range(m):
            acc += binom * b[j]
            binom = binom * (m + 1 - j) // (j + 1)
        b[m] = -acc / (m + 1)
    return tuple(b)


def _stirling_coefficients(kind):
    b = bernoulli_numbers(2 * STIRLING_TERMS)
    if kind == "lgamma":
        return [float(b[2 * j] / (2 * j * (2 * j - 1))) for j in range(1, STIRLING_TERMS + 1)]
    if kind == "digamma":
        return [float(b[2 * j] / (2 * j)) for j in range(1, STIRLING_TERMS + 1)]
    return [float(b[2 * j]) for j in range(1, STIRLING_TERMS + 1)]


_LG_COEF = _stirling_coefficients("lgamma")
_PSI_COEF = _stirling_coefficients("digamma")
_PSI1_COEF = _stirling_coefficients("trigamma")


def _prepare(s):
    z = np.asarray(s, dtype=complex)
    bad = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(bad):
        raise DomainError(f"Gamma has a pole at s = {z[bad].flat[0].real:g}")
    if not np.all(np.isfinite(z)):
        raise DomainError("non-finite argument")
    return z


def _shift_counts(z):
    return np.maximum(0, np.ceil(SHIFT_TARGET - z.real)).astype(np.int64)


def _horner(coef, w2):
    acc = np.zeros_like(w2)
    for c in reversed(coef):
        acc = acc * w2 + c
    return acc


def _finish(result, s):
    if np.ndim(s) == 0 and not isinstance(s, np.ndarray):
        return complex(result)
    return result


def log_gamma(s):
    """Holomorphic ``log Gamma(s)``; scalar in, complex scalar out."""
    z = _prepare(s)
    shift = _shift_counts(z)
    w = z.copy()
    acc = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        acc[m] += np.log(w[m])
        w[m] += 1.0
    inv = 1.0 / w
    series = inv * _horner(_LG_COEF, inv * inv)
    out = (w - 0.5) * np.log(w) - w + LOG_SQRT_2PI + series - acc
    out = np.where((z.imag == 0) & (z.real > 0), out.real + 0j, out)
    return _finish(out, s)


def digamma(s):
    """``psi(s) = d/ds log Gamma(s)``."""
    z = _prepare(s)
    shift = _shift_counts(z)
    w = z.copy()
    acc = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        acc[m] += 1.0 / w[m]
        w[m] += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    out = np.log(w) - 0.5 * inv - inv2 * _horner(_PSI_COEF, inv2) - acc
    return _finish(out, s)


def trigamma(s):
    """``psi'(s)``; used for derivative bounds on theta."""
    z = _prepare(s)
    shift = _shift_counts(z)
    w = z.copy()
    acc = np.zeros_like(z)
    for j in range(int(shift.max(initial=0))):
        m = shift > j
        acc[m] += 1.0 / (w[m] * w[m])
        w[m] += 1.0
    inv = 1.0 / w
    inv2 = inv * inv
    out = inv + 0.5 * inv2 + inv * inv2 * _horner(_PSI1_COEF, inv2) + acc
    return _finish(out, s)


def gamma(s):
    return np.exp(log_gamma(s)) if isinstance(s, np.ndarray) else cmath.exp(log_gamma(s))


def _check_incgamma_args(s, x):
    s = complex(s)
    x = complex(x)
    if abs(s) > MAX_INCGAMMA_S:
        raise DomainError(f"|s| = {abs(s):.6g} exceeds validated range {MAX_INCGAMMA_S:g}")
    if not x.real > 0:
        raise DomainError("incomplete gamma requires Re(x) > 0")
    return s, x


def _lower_series(s, x):
    # sum_{n>=0} x^n / (s (s+1) ... (s+n))
    ap = s
    term = 1.0 / s
    total = term
    for n in range(SERIES_MAX_TERMS):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total, n + 1
    raise NumericError(
        "lower incomplete gamma series did not converge",
        s=s, x=x, terms=SERIES_MAX_TERMS, last_term=abs(term),
    )


def _upper_cf(s, x):
    # modified Lentz evaluation of Legendre's continued fraction
    b = x + 1.0 - s
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, CF_MAX_STEPS + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h, i
    raise NumericError(
        "incomplete gamma continued fraction did not converge",
        s=s, x=x, steps=CF_MAX_STEPS, last_delta=abs(delta - 1.0),
    )


def lower_incomplete_gamma(s, x):
    """``gamma(s, x) = int_0^x u^(s-1) e^(-u) du`` by the power series."""
    s, x = _check_incgamma_args(s, x)
    total, _ = _lower_series(s, x)
    return total * cmath.exp(s * cmath.log(x) - x)


def upper_incomplete_gamma(s, x, scaled=False):
    """``Gamma(s, x) = int_x^inf u^(s-1) e^(-u) du``.

    ``x`` may be complex with positive real part; the integral then runs along
    the horizontal ray from ``x``.  Continued fraction when ``|x| >= |s| + 2``,
    otherwise ``Gamma(s) - gamma(s, x)``.  With ``scaled=True`` the result is
    ``x^(-s) Gamma(s, x)``, which stays representable for rotated arguments
    where ``x^s`` and ``Gamma(s)`` separately over- or underflow.
    """
    s, x = _check_incgamma_args(s, x)
    log_x = cmath.log(x)
    if abs(x) >= abs(s) + 2.0:
        h, _ = _upper_cf(s, x)
        return h * cmath.exp(-x if scaled else s * log_x - x)
    if s.imag == 0 and s.real <= 0 and s.real == round(s.real):
        raise DomainError("series branch needs Gamma(s); s is a pole")
    total, _ = _lower_series(s, x)
    if scaled:
        return cmath.exp(log_gamma(s) - s * log_x) - total * cmath.exp(-x)
    return cmath.exp(log_gamma(s)) - total * cmath.exp(s * log_x - x)
