"""Fourier coefficients of level-1 Hecke eigenforms.

The discriminant form ``Delta = q prod (1 - q^n)^24`` is generated natively;
other one-dimensional weights (16, 18, 20, 22, 26) are read from coefficient
files.  Exact values are Python integers, restricted to the signed 128-bit
range so that tables written to disk stay portable.
"""
from dataclasses import dataclass, field
from functools import lru_cache
import json
import math
import os

import numpy as np

from .errors import CoefficientError, DomainError

__all__ = [
    "FourierCoefficients",
    "CoefficientReport",
    "tau_coefficients",
    "hecke_reconstruct",
    "verify_coefficients",
    "load_coefficients",
    "save_coefficients",
    "divisor_counts",
    "divisor_bound_constant",
    "primes_up_to",
]

MAX_GENERATED = 10**6
INT128_LIMIT = 2**127
DEFAULT_WEIGHT = 12


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Coefficient table ``a(1..N)`` of a weight-``k`` eigenform.

    ``exact[n-1]`` holds ``a(n)``; ``normalized[n-1]`` holds
    ``a(n) n^(-(k-1)/2)``, which Deligne bounds by the divisor count.
    """

    weight: int
    exact: tuple
    normalized: np.ndarray = field(repr=False)

    @property
    def count(self):
        return len(self.exact)

    @property
    def values(self):
        """``a(n)`` as floats (index n-1)."""
        return np.array([float(a) for a in self.exact])

    def __getitem__(self, n):
        if not 1 <= n <= self.count:
            raise IndexError(f"a({n}) outside table 1..{self.count}")
        return self.exact[n - 1]

    def __eq__(self, other):
        if not isinstance(other, FourierCoefficients):
            return NotImplemented
        return self.weight == other.weight and self.exact == other.exact

    def __hash__(self):
        return hash((self.weight, self.count, self.exact[: min(8, self.count)]))


def _normalize(exact, weight):
    n = np.arange(1, len(exact) + 1, dtype=float)
    vals = np.array([float(a) for a in exact])
    out = vals * n ** (-(weight - 1) / 2.0)
    out.setflags(write=False)
    return out


def _make(weight, exact):
    exact = tuple(int(a) for a in exact)
    return FourierCoefficients(weight=weight, exact=exact, normalized=_normalize(exact, weight))


# -- exact power series via Kronecker substitution ---------------------------

def _slot_bits(bound):
    # bytes-aligned slot able to hold any signed value of magnitude <= bound
    bits = max(8, bound.bit_length() + 2)
    return (bits + 7) // 8 * 8


def _pack(coeffs, bits):
    half = 1 << (bits - 1)
    nbytes = bits // 8
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in coeffs)
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * len(coeffs), "little")
    return int.from_bytes(raw, "little") - bias


def _unpack(value, count, bits):
    half = 1 << (bits - 1)
    nbytes = bits // 8
    bias = int.from_bytes(half.to_bytes(nbytes, "little") * count, "little")
    # only the low ``count`` slots are wanted; masking is exact modulo 2^(bits*count)
    shifted = (value + bias) & ((1 << (bits * count)) - 1)
    raw = shifted.to_bytes(count * nbytes, "little")
    return [int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half for i in range(count)]


def _series_mul(a, b, length):
    """Exact product of two integer power series, truncated to ``length`` terms."""
    a = a[:length]
    b = b[:length]
    bound = min(len(a), len(b)) * max(map(abs, a)) * max(map(abs, b))
    bits = _slot_bits(bound)
    product = _pack(a, bits) * _pack(b, bits)
    return _unpack(product, length, bits)


def _euler_series(length):
    # prod (1 - q^n) = sum_m (-1)^m q^(m(3m-1)/2), m over all integers
    e = [0] * length
    m = 0
    while True:
        hit = False
        for j in ((m * (3 * m - 1)) // 2, (m * (3 * m + 1)) // 2):
            if j < length:
                e[j] = -1 if m % 2 else 1
                hit = True
        if not hit:
            return e
        m += 1


def tau_coefficients(N):
    """Ramanujan ``tau(1..N)``, the weight-12 discriminant eigenform."""
    if isinstance(N, bool) or not isinstance(N, (int, np.integer)):
        raise DomainError("N must be an integer")
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    if N > MAX_GENERATED:
        raise DomainError(f"N = {N} exceeds the generation guard {MAX_GENERATED}")
    e1 = _euler_series(N)
    e2 = _series_mul(e1, e1, N)
    e4 = _series_mul(e2, e2, N)
    e8 = _series_mul(e4, e4, N)
    e16 = _series_mul(e8, e8, N)
    e24 = _series_mul(e16, e8, N)
    for n, a in enumerate(e24, start=1):
        if abs(a) >= INT128_LIMIT:
            raise CoefficientError(f"tau({n}) overflows the signed 128-bit range")
    return _make(DEFAULT_WEIGHT, e24)


# -- number theory helpers ---------------------------------------------------

def primes_up_to(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p::p] = False
    return np.flatnonzero(sieve)


def _smallest_prime_factor(n):
    spf = np.arange(n + 1, dtype=np.int64)
    for p in range(2, int(n**0.5) + 1):
        if spf[p] == p:
            block = spf[p * p::p]
            np.copyto(block, p, where=block == np.arange(p * p, n + 1, p))
    return spf


def divisor_counts(n):
    """``d(1..n)`` by sieve; index ``m-1`` holds ``d(m)``."""
    d = np.zeros(n + 1, dtype=np.int64)
    for j in range(1, n + 1):
        d[j::j] += 1
    return d[1:]


@lru_cache(maxsize=None)
def divisor_bound_constant(eta):
    """Smallest ``C`` with ``d(n) <= C n^eta`` for every ``n >= 1``.

    ``d(n)/n^eta`` is multiplicative, so the supremum is the product over
    primes ``p < 2^(1/eta)`` of ``max_a (a+1)/p^(a eta)``.
    """
    if eta <= 0:
        raise DomainError("eta must be positive")
    const = 1.0
    for p in primes_up_to(int(2 ** (1 / eta)) + 1):
        a = 0
        while (a + 2) / float(p) ** ((a + 1) * eta) > (a + 1) / float(p) ** (a * eta):
            a += 1
        const *= (a + 1) / float(p) ** (a * eta)
    return const


def _factorize(n, spf):
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def hecke_reconstruct(prime_values, weight, N):
    """Rebuild ``a(1..N)`` from the values ``a(p)`` at primes.

    Prime powers come from the Hecke recurrence
    ``a(p^(r+1)) = a(p) a(p^r) - p^(k-1) a(p^(r-1))``, everything else from
    multiplicativity.  ``prime_values`` maps each prime ``p <= N`` to ``a(p)``.
    """
    a = [0] * (N + 1)
    if N >= 1:
        a[1] = 1
    for p in primes_up_to(N):
        p = int(p)
        pk = p ** (weight - 1)
        prev, cur = 1, int(prime_values[p])
        q = p
        a[q] = cur
        while q * p <= N:
            prev, cur = cur, int(prime_values[p]) * cur - pk * prev
            q *= p
            a[q] = cur
    spf = _smallest_prime_factor(N) if N >= 2 else None
    for n in range(2, N + 1):
        p = int(spf[n])
        pe = p
        while n % (pe * p) == 0:
            pe *= p
        if pe != n:
            a[n] = a[pe] * a[n // pe]
    return a[1:]


@dataclass
class CoefficientReport:
    multiplicativity: list
    recurrence: list
    bound: list
    partial_sums: list

    @property
    def ok(self):
        return not (self.multiplicativity or self.recurrence or self.bound)

    def summary(self):
        return (
            f"multiplicativity violations: {len(self.multiplicativity)}\n"
            f"recurrence violations: {len(self.recurrence)}\n"
            f"bound violations: {len(self.bound)}"
        )


def verify_coefficients(c, bound_slack=1e-12):
    """Check eigenform identities on a coefficient table.

    Multiplicativity is checked as ``a(n) = prod a(p^e)`` over the
    prime-power factorisation; a failure at ``n`` is reported as the pair
    ``(p^e, n / p^e)`` for its smallest prime power.  Partial-sum samples are
    ``(x, |sum_{n<=x} a(n)| / (x^(k/2) log x))`` on a decimal grid.
    """
    N, k = c.count, c.weight
    a = (None,) + tuple(c.exact)
    mult, rec, bnd = [], [], []
    if a[1] != 1:
        mult.append((1, 1))
    spf = _smallest_prime_factor(N) if N >= 2 else None
    for n in range(2, N + 1):
        fac = _factorize(n, spf)
        if len(fac) > 1:
            pe = fac[0][0] ** fac[0][1]
            prod = 1
            for p, e in fac:
                prod *= a[p**e]
            if prod != a[n]:
                mult.append((pe, n // pe))
    for p in primes_up_to(N):
        p = int(p)
        pk = p ** (k - 1)
        q_prev, q = 1, p
        while q * p <= N:
            if a[q * p] != a[p] * a[q] - pk * a[q_prev]:
                rec.append((p, q * p))
            q_prev, q = q, q * p
    d = divisor_counts(N)
    viol = np.flatnonzero(np.abs(c.normalized) > d * (1 + bound_slack))
    bnd = [int(i) + 1 for i in viol]
    samples = []
    x = 10
    running = 0
    idx = 0
    while x <= N:
        while idx < x:
            running += a[idx + 1]
            idx += 1
        samples.append((x, abs(running) / (x ** (k / 2) * math.log(x))))
        x *= 10
    return CoefficientReport(mult, rec, bnd, samples)


def _validate_table(weight, exact):
    if isinstance(weight, bool) or not isinstance(weight, int):
        raise CoefficientError("weight must be an integer")
    if weight < 12 or weight % 2:
        raise CoefficientError(f"weight {weight} invalid: must be even and >= 12")
    if not exact:
        raise CoefficientError("coefficient table is empty")
    if exact[0] != 1:
        raise CoefficientError(f"a(1) = {exact[0]}, eigenform normalization requires a(1) = 1")
    for n, v in enumerate(exact, start=1):
        if abs(v) >= INT128_LIMIT:
            raise CoefficientError(f"a({n}) overflows the signed 128-bit range")
    report = verify_coefficients(_make(weight, exact))
    if report.multiplicativity:
        m, n = report.multiplicativity[0]
        raise CoefficientError(f"multiplicativity fails: a({m * n}) != a({m}) a({n})")
    if report.recurrence:
        p, q = report.recurrence[0]
        raise CoefficientError(f"Hecke recurrence fails at p = {p}, a({q})")
    if report.bound:
        raise CoefficientError(f"Deligne bound fails at n = {report.bound[0]}")


def load_coefficients(path):
    """Read and validate a coefficient JSON file."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CoefficientError(f"{path}: not valid JSON ({exc})") from exc
    try:
        weight = doc["weight"]
        count = doc["count"]
        exact = [int(str(v)) for v in doc["exact"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise CoefficientError(f"{path}: malformed coefficient file ({exc})") from exc
    if count != len(exact):
        raise CoefficientError(f"{path}: count {count} != {len(exact)} values")
    _validate_table(weight, exact)
    return _make(weight, exact)


def save_coefficients(c, path):
    doc = {"weight": c.weight, "count": c.count, "exact": [str(a) for a in c.exact]}
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    os.replace(tmp, path)


def from_exact(weight, exact):
    """Build a validated table from in-memory integers."""
    exact = [int(a) for a in exact]
    _validate_table(weight, exact)
    return _make(weight, exact)
