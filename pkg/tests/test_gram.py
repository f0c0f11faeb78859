import math

import numpy as np
import pytest

from gramlab.errors import DomainError
from gramlab.gram import gram_count, gram_point, gram_points, gram_points_in, gram_seed, v0_and_tmin
from gramlab.lfunc import theta


def test_v0_and_tmin(ctx):
    assert v0_and_tmin(ctx) == (-2, 7.0)


def test_gram_zero(ctx):
    p = gram_point(ctx, 0)
    assert p.t == pytest.approx(18.5989, abs=1e-4)
    # the leading-order seed is noticeably lower for small v
    assert float(gram_seed(0)) == pytest.approx(17.8, abs=0.1)


def test_residuals(ctx):
    pts = gram_points(ctx, np.arange(-2, 1500))
    t = np.array([p.t for p in pts])
    assert np.all(np.diff(t) > 0)
    assert max(abs(theta(ctx, p.t) - p.v * math.pi) for p in pts) <= 1e-10


def test_batch_independence(ctx):
    a = gram_points(ctx, np.arange(100, 140))
    b = gram_points(ctx, [117])
    assert a[17].t == b[0].t


def test_spacing_trend(ctx):
    pts = gram_points(ctx, [999, 1000, 1001])
    spacing = 0.5 * (pts[2].t - pts[0].t)
    assert spacing / (math.pi / math.log(pts[1].t / (2 * math.pi))) == pytest.approx(1, rel=0.05)


def test_count_trend(ctx):
    T = 1000.0
    n = gram_count(ctx, 2 * T) - gram_count(ctx, T)
    refined = (2 * T / math.pi) * math.log(2 * T / (2 * math.pi * math.e)) - (T / math.pi) * math.log(T / (2 * math.pi * math.e))
    assert n / refined == pytest.approx(1, rel=0.05)


@pytest.mark.xfail(strict=True, reason="t_v ~ v pi / log v holds only in the limit; the ratio is 1.60 at v = 10^4")
def test_literal_leading_form_within_ten_percent(ctx):
    p = gram_point(ctx, 10_000)
    assert p.t / (10_000 * math.pi / math.log(10_000)) == pytest.approx(1, rel=0.1)


def test_points_in_window_and_parity(ctx):
    even = gram_points_in(ctx, 50, 100, "even")
    odd = gram_points_in(ctx, 50, 100, "odd")
    assert all(p.v % 2 == 0 for p in even) and all(p.v % 2 == 1 for p in odd)
    allp = gram_points_in(ctx, 50, 100)
    assert sorted(p.v for p in even + odd) == [p.v for p in allp]
    assert all(50 < p.t <= 100 for p in allp)


def test_domain(ctx):
    with pytest.raises(DomainError):
        gram_points(ctx, [-3])
    with pytest.raises(DomainError):
        gram_points_in(ctx, 5, 10)
    with pytest.raises(DomainError):
        gram_points(ctx, [10**6])
