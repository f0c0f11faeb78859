import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gramlab import make_context, tau_coefficients
from gramlab.errors import ConfigurationError, DomainError
from gramlab.lfunc import (
    MAX_T,
    convexity_profile,
    delta_pow,
    f_upper_half,
    l_direct,
    l_eval,
    l_values,
    log_delta,
    log_delta_asymptotic,
    log_delta_deriv,
    theta,
    theta_asymptotic,
    theta_prime,
    z_eval,
    z_values,
)

# L(s) from the unrotated incomplete-gamma series at 60 digits
L_REF = [
    (6 + 0j, 0.7921228386460306 + 0j),
    (6 + 25j, -0.20364120443533187 - 0.6900450175744621j),
    (8.5 + 0j, 0.948587407468044 + 0j),
    (4 + 10j, -9.345500800807134 + 3.6270871511677747j),
]
THETA_REF = [(20.0, 1.6266477465587434), (100.0, 175.79315537000403), (1000.0, 4069.077731151057)]


@pytest.mark.parametrize("s, ref", L_REF)
def test_l_reference(ctx, s, ref):
    r = l_eval(ctx, s)
    assert abs(r.value - ref) <= 1e-12 * abs(ref)
    assert r.est_error < 1e-10 and r.ok(1e-10)


@pytest.mark.parametrize("t, ref", THETA_REF)
def test_theta_reference(ctx, t, ref):
    assert theta(ctx, t) == pytest.approx(ref, rel=1e-13)


def test_theta_residual_small(ctx):
    _, resid = theta(ctx, np.linspace(10, 2000, 50), with_residual=True)
    assert np.max(resid) < 1e-10


def test_z_reference(ctx):
    assert z_eval(ctx, 20.0) == pytest.approx(-0.7436182637025304, rel=1e-11)


def test_first_zero_bracketed(ctx):
    Z, _, _ = z_values(ctx, [9.0, 9.5])
    assert Z[0] < 0 < Z[1]


def test_modularity_of_f(ctx):
    # f(i/y) = y^k f(iy) for weight 12
    y = 1.3
    assert f_upper_half(ctx, 1 / y) == pytest.approx(y**12 * f_upper_half(ctx, y), rel=1e-11)


def test_f_against_short_sum(ctx):
    y = 0.9
    a = tau_coefficients(500).values
    n = np.arange(1, 501)
    assert f_upper_half(ctx, y) == pytest.approx(math.fsum(a * np.exp(-2 * math.pi * n * y)), rel=1e-13)


def test_f_domain(ctx):
    with pytest.raises(DomainError):
        f_upper_half(ctx, 0.4)


def test_direct_series_agrees(ctx):
    for t in (0.0, 7.0, 40.0):
        s = 8.5 + 1j * t
        assert abs(l_eval(ctx, s).value - l_direct(ctx, s).value) <= 1e-10 * abs(l_direct(ctx, s).value)
    with pytest.raises(DomainError):
        l_direct(ctx, 6 + 1j)


def test_log_delta_derivative_finite_difference(ctx):
    s, h = 6.3 + 40j, 1e-5
    fd = (log_delta(ctx, s + h) - log_delta(ctx, s - h)) / (2 * h)
    assert abs(fd - log_delta_deriv(ctx, s)) < 1e-8


def test_theta_prime_finite_difference(ctx):
    t, h = 123.4, 1e-4
    fd = (theta(ctx, t + h) - theta(ctx, t - h)) / (2 * h)
    assert theta_prime(ctx, t) == pytest.approx(fd, rel=1e-8)


def test_asymptotic_forms(ctx):
    # leading-order forms: the error decays like 1/t
    gaps = [abs(log_delta(ctx, 6.5 + 1j * t) - log_delta_asymptotic(ctx, 6.5 + 1j * t)) * t for t in (200.0, 800.0)]
    assert gaps[1] < 50 and gaps[1] == pytest.approx(gaps[0], rel=0.05)
    t = np.array([500.0, 1500.0])
    assert np.all(np.abs(theta(ctx, t) - theta_asymptotic(t)) * t < 20)


def test_delta_modulus_on_critical_line(ctx):
    t = np.linspace(10, 2000, 200)
    assert np.max(np.abs(np.abs(delta_pow(ctx, 6 + 1j * t, 1.0)) - 1)) < 1e-10


def test_conjugate_symmetry(ctx):
    v, _ = l_values(ctx, np.array([6 + 33j, 6 - 33j, 2.5 + 150j, 2.5 - 150j]))
    assert abs(v[0] - np.conj(v[1])) < 1e-14 * abs(v[0])
    assert abs(v[2] - np.conj(v[3])) < 1e-14 * abs(v[2])


def test_workers_do_not_change_results(ctx):
    s = 6 + 1j * np.linspace(10, 1500, 300)
    a, ea = l_values(ctx, s, workers=1)
    b, eb = l_values(ctx, s, workers=4)
    assert np.array_equal(a, b) and np.array_equal(ea, eb)


def test_domain_errors(ctx):
    with pytest.raises(DomainError):
        l_eval(ctx, 12.5 + 1j)
    with pytest.raises(DomainError):
        l_eval(ctx, 6 + 1j * (MAX_T + 1))
    with pytest.raises(DomainError):
        l_eval(ctx, complex(6, float("nan")))


def test_short_table_names_needed_count():
    small = make_context(tau_coefficients(300))
    assert small.max_t() < MAX_T
    with pytest.raises(ConfigurationError, match="needs"):
        l_eval(small, 6 + 1900j)


def test_context_validation():
    with pytest.raises(ConfigurationError):
        make_context(quad_tol=1e-3)
    with pytest.raises(ConfigurationError):
        make_context(c=7.0)
    with pytest.raises(ConfigurationError):
        make_context(d=1.5)


def test_convexity_profile(ctx):
    prof = convexity_profile(ctx, np.linspace(20, 200, 10))
    assert set(prof) == {6 - ctx.c, 6.0, 6 + ctx.c}


@settings(max_examples=25, deadline=None)
@given(st.floats(min_value=0.2, max_value=11.8), st.floats(min_value=-300, max_value=300))
def test_functional_equation_property(ctx, sigma, t):
    s = complex(sigma, t)
    lhs = l_eval(ctx, s).value
    rhs = delta_pow(ctx, s, 1.0) * l_eval(ctx, 12 - s).value
    assert abs(lhs - rhs) <= 1e-8 * max(abs(lhs), abs(rhs), 1e-300) + 1e-12
