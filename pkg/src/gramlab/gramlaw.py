"""Sums of Z at Gram points, the cumulative sum S(T), and Gram-interval sign scans."""
from dataclasses import dataclass, field
import csv
import io
import math

import numpy as np

from .errors import DomainError
from .gram import gram_point, gram_points, gram_points_in, v0_and_tmin
from .lfunc import theta, z_values

__all__ = [
    "GramSumReport",
    "ScanRow",
    "ScanReport",
    "weight_omega",
    "weighted_gram_sum",
    "window_sum",
    "unweighted_gram_sum",
    "s_of_t",
    "s_samples",
    "partial_summation_sum",
    "gram_interval_scan",
]

SCAN_SUBPANELS = 8
ZERO_TOL = 1e-6
_ROOT_STEPS = 100


@dataclass(frozen=True)
class GramSumReport:
    window: tuple
    parity: str
    sum: float
    dominant: float
    deviation: float
    scaled_deviation: float
    count: int
    weighted: bool

    def as_dict(self):
        return {
            "window": list(self.window),
            "parity": self.parity,
            "weighted": self.weighted,
            "count": self.count,
            "sum": self.sum,
            "dominant": self.dominant,
            "deviation": self.deviation,
            "scaled_deviation": self.scaled_deviation,
        }


def weight_omega(t):
    """``1 / log(t / 2pi)`` for ``t > 2pi``."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 2 * math.pi):
        raise DomainError("omega(t) needs t > 2 pi")
    out = 1.0 / np.log(t / (2 * math.pi))
    return float(out) if out.ndim == 0 else out


def _sign(parity):
    if parity == "even":
        return 1.0
    if parity == "odd":
        return -1.0
    raise DomainError("parity must be even or odd")


def _report(window, parity, total, dominant, scale, count, weighted):
    dev = abs(total - dominant)
    return GramSumReport(tuple(window), parity, total, dominant, dev, dev / scale ** 0.75, count, weighted)


def window_sum(ctx, T1, T2, parity="even", workers=1):
    """``sum omega(t_v) Z(t_v)`` over Gram points of ``parity`` in ``(T1, T2]``."""
    pts = gram_points_in(ctx, T1, T2, parity)
    if not pts:
        return 0.0, 0
    t = np.array([p.t for p in pts])
    Z, _, _ = z_values(ctx, t, workers=workers)
    return math.fsum(weight_omega(t) * Z), len(pts)


def weighted_gram_sum(ctx, T, parity="even", workers=1):
    """Weighted sum over ``(T, 2T]``; dominant term ``+T/pi`` (even) or ``-T/pi`` (odd)."""
    _sign(parity)
    total, count = window_sum(ctx, T, 2 * T, parity, workers)
    return _report((T, 2 * T), parity, total, _sign(parity) * T / math.pi, T, count, True)


def _indices(parity, M, N):
    v = np.arange(M, N + 1)
    return 2 * v if parity == "even" else 2 * v + 1


def unweighted_gram_sum(ctx, M, N, parity="even", workers=1):
    """``sum_{v=M}^N Z(t_{2v})`` (or ``t_{2v+1}``); dominant term ``+-2N``."""
    sign = _sign(parity)
    v0, _ = v0_and_tmin(ctx)
    if not (2 * M >= v0 and M <= N):
        raise DomainError(f"need v0/2 <= M <= N (v0 = {v0})")
    pts = gram_points(ctx, _indices(parity, M, N))
    Z, _, _ = z_values(ctx, np.array([p.t for p in pts]), workers=workers)
    return _report((M, N), parity, math.fsum(Z), sign * 2.0 * N, N, len(pts), False)


def s_samples(ctx, T, parity="even", workers=1):
    """Indices and ordinates of Gram points ``t_min < t_v <= T`` and the running weighted sums."""
    _, t_min = v0_and_tmin(ctx)
    if not T > t_min:
        raise DomainError(f"need T > t_min = {t_min:g}")
    v0, _ = v0_and_tmin(ctx)
    vs = np.arange(v0, math.floor(theta(ctx, T) / math.pi) + 2)
    if parity in ("even", "odd"):
        vs = vs[vs % 2 == (0 if parity == "even" else 1)]
    pts = [p for p in gram_points(ctx, vs) if t_min < p.t <= T]
    t = np.array([p.t for p in pts])
    v = np.array([p.v for p in pts], dtype=np.int64)
    if t.size == 0:
        return v, t, t
    Z, _, _ = z_values(ctx, t, workers=workers)
    terms = weight_omega(t) * Z
    running = np.array([math.fsum(terms[: j + 1]) for j in range(terms.size)])
    return v, t, running


def s_of_t(ctx, T, parity="even", workers=1):
    """``S(T) = sum_{t_v <= T} omega(t_v) Z(t_v)`` over Gram points of ``parity`` above t_min."""
    _, _, running = s_samples(ctx, T, parity, workers)
    return float(running[-1]) if running.size else 0.0


def partial_summation_sum(ctx, M, N, parity="even", workers=1):
    """``sum_{v=M}^N Z(t_v)`` rebuilt from samples of ``S`` by Abel summation.

    With ``g(t) = log(t/2pi)`` and ``S_w`` the weighted sum restricted to the
    index range, ``sum g(t_j) a_j = g(t_last) S_w(t_last) - int S_w(u) g'(u) du``
    and the integral of the step function ``S_w`` is a finite sum.
    """
    v0, _ = v0_and_tmin(ctx)
    if not (2 * M >= v0 and M <= N):
        raise DomainError(f"need v0/2 <= M <= N (v0 = {v0})")
    v_first, v_last = _indices(parity, M, M)[0], _indices(parity, N, N)[0]
    last = gram_point(ctx, v_last)
    v, t, running = s_samples(ctx, last.t, parity, workers)
    keep = (v >= v_first) & (v <= v_last)
    base = running[~keep][-1] if np.any(~keep) else 0.0
    t, sw = t[keep], running[keep] - base
    g_end = math.log(t[-1] / (2 * math.pi))
    integral = math.fsum(sw[:-1] * np.log(t[1:] / t[:-1]))
    return g_end * float(sw[-1]) - integral


# -- scan --------------------------------------------------------------------

@dataclass(frozen=True)
class ScanRow:
    v: int
    t: float
    z: float
    sign: int
    interval_sign_change: bool
    zeros: tuple  # located zeros in (t_v, t_{v+1}]


@dataclass(frozen=True)
class ScanReport:
    window: tuple
    rows: list
    intervals: int
    good_intervals: int
    sign_changes: int
    even_positive: int
    even_total: int
    odd_negative: int
    odd_total: int
    max_abs_z_at_zero: float
    note: str = field(default="zero counts are sign changes; even-order zeros are not detected")

    @property
    def good_fraction(self):
        return self.good_intervals / self.intervals if self.intervals else float("nan")

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["v", "t_v", "Z", "sign", "interval_sign_change", "refined_zero_t"])
        for r in self.rows:
            zeros = ";".join(format(z, ".17g") for z in r.zeros)
            w.writerow([r.v, format(r.t, ".17g"), format(r.z, ".17g"), r.sign, int(r.interval_sign_change), zeros])
        return buf.getvalue()

    def summary(self):
        return {
            "window": list(self.window),
            "intervals": self.intervals,
            "good_intervals": self.good_intervals,
            "good_fraction": self.good_fraction,
            "sign_changes": self.sign_changes,
            "even_positive": self.even_positive,
            "even_total": self.even_total,
            "odd_negative": self.odd_negative,
            "odd_total": self.odd_total,
            "max_abs_z_at_zero": self.max_abs_z_at_zero,
            "note": self.note,
        }


def _locate_zeros(ctx, a, b, fa, fb, workers):
    """Illinois iteration on brackets ``[a, b]`` where Z changes sign; vectorised."""
    a, b, fa, fb = a.copy(), b.copy(), fa.copy(), fb.copy()
    x = 0.5 * (a + b)
    fx = np.zeros_like(a)
    side = np.zeros(a.size, dtype=int)
    active = np.ones(a.size, dtype=bool)
    for _ in range(_ROOT_STEPS):
        if not np.any(active):
            break
        denom = fb - fa
        xs = np.where(denom != 0, b - fb * (b - a) / np.where(denom != 0, denom, 1.0), 0.5 * (a + b))
        xs = np.where((xs > a) & (xs < b), xs, 0.5 * (a + b))
        idx = np.flatnonzero(active)
        fnew, _, _ = z_values(ctx, xs[idx], workers=workers)
        x[idx], fx[idx] = xs[idx], fnew
        left = np.zeros(a.size, dtype=bool)
        left[idx] = np.sign(fnew) == np.sign(fa[idx])
        right = np.zeros(a.size, dtype=bool)
        right[idx] = ~left[idx]
        # Illinois: halve the retained endpoint value after two moves on one side
        fb = np.where(left & (side == 1), 0.5 * fb, fb)
        fa = np.where(right & (side == -1), 0.5 * fa, fa)
        a = np.where(left, x, a)
        fa = np.where(left, fx, fa)
        b = np.where(right, x, b)
        fb = np.where(right, fx, fb)
        side = np.where(left, 1, np.where(right, -1, side))
        done = (np.abs(fx) <= 1e-3 * ZERO_TOL) | (b - a <= 1e-13 * np.maximum(1.0, np.abs(x)))
        active &= ~done
    return x, fx


def gram_interval_scan(ctx, T1, T2, workers=1):
    """Sign statistics of Z over the Gram intervals ``(t_v, t_{v+1}]`` in ``(T1, T2]``.

    Each interval is sampled at ``SCAN_SUBPANELS`` equal subpanels; every
    sign change among the samples is refined to a zero with ``|Z| <= 1e-6``.
    """
    pts = gram_points_in(ctx, T1, T2, "all")
    t = np.array([p.t for p in pts])
    v = np.array([p.v for p in pts])
    Z, _, _ = z_values(ctx, t, workers=workers)
    n_int = max(0, t.size - 1)
    frac = np.arange(1, SCAN_SUBPANELS) / SCAN_SUBPANELS
    inner = (t[:-1, None] + (t[1:] - t[:-1])[:, None] * frac[None, :]) if n_int else np.zeros((0, SCAN_SUBPANELS - 1))
    Zin, _, _ = z_values(ctx, inner.ravel(), workers=workers)
    grid_t = np.concatenate([t[:-1, None], inner, t[1:, None]], axis=1) if n_int else np.zeros((0, 2))
    grid_z = np.concatenate([Z[:-1, None], Zin.reshape(inner.shape), Z[1:, None]], axis=1) if n_int else grid_t
    change = np.sign(grid_z[:, :-1]) * np.sign(grid_z[:, 1:]) < 0
    rows_i, cols_i = np.nonzero(change)
    zero_t = np.zeros(0)
    zero_z = np.zeros(0)
    if rows_i.size:
        a = grid_t[rows_i, cols_i]
        b = grid_t[rows_i, cols_i + 1]
        zero_t, zero_z = _locate_zeros(ctx, a, b, grid_z[rows_i, cols_i], grid_z[rows_i, cols_i + 1], workers)
    found = [[] for _ in range(n_int)]
    for r, zt in zip(rows_i, zero_t):
        found[r].append(float(zt))
    # exact zeros on a sample point count as located zeros too
    for r, c in zip(*np.nonzero(grid_z[:, 1:] == 0)):
        found[r].append(float(grid_t[r, c + 1]))
    rows = []
    for j in range(t.size):
        flag = bool(j < n_int and np.sign(Z[j]) != np.sign(Z[j + 1]))
        rows.append(ScanRow(int(v[j]), float(t[j]), float(Z[j]), int(np.sign(Z[j])), flag,
                            tuple(sorted(found[j])) if j < n_int else ()))
    good = sum(r.interval_sign_change for r in rows)
    even = v % 2 == 0
    return ScanReport(
        window=(T1, T2),
        rows=rows,
        intervals=n_int,
        good_intervals=int(good),
        sign_changes=int(rows_i.size),
        even_positive=int(np.sum(even & (Z > 0))),
        even_total=int(np.sum(even)),
        odd_negative=int(np.sum(~even & (Z < 0))),
        odd_total=int(np.sum(~even)),
        max_abs_z_at_zero=float(np.max(np.abs(zero_z))) if zero_z.size else 0.0,
    )
