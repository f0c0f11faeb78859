import json

import numpy as np
import pytest

from gramlab.coeffs import (
    MAX_GENERATED,
    divisor_counts,
    from_exact,
    hecke_reconstruct,
    load_coefficients,
    primes_up_to,
    save_coefficients,
    tau_coefficients,
    verify_coefficients,
)
from gramlab.errors import CoefficientError, DomainError


def brute_tau(N):
    """q * prod (1 - q^n)^24 by repeated multiplication with (1 - q^n)."""
    c = [0] * (N + 1)
    c[0] = 1
    for n in range(1, N + 1):
        for _ in range(24):
            for j in range(N, n - 1, -1):
                c[j] -= c[j - n]
    return [c[n - 1] for n in range(1, N + 1)]


def test_first_values():
    c = tau_coefficients(12)
    assert list(c.exact) == [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920, 534612, -370944]
    assert c.weight == 12 and c.count == 12 and c[2] == -24


def test_against_brute_force_expansion():
    assert list(tau_coefficients(300).exact) == brute_tau(300)


def test_known_large_value():
    assert tau_coefficients(1000)[1000] == -30328412970240000


def test_hecke_reconstruction_agrees():
    c = tau_coefficients(3000)
    primes = {int(p): c[int(p)] for p in primes_up_to(3000)}
    assert list(hecke_reconstruct(primes, 12, 3000)) == list(c.exact)


def test_verify_clean_table():
    rep = verify_coefficients(tau_coefficients(2000))
    assert rep.ok
    assert "multiplicativity violations: 0" in rep.summary()
    assert all(v < 1 for _, v in rep.partial_sums)


def test_normalized_within_divisor_bound():
    c = tau_coefficients(2000)
    assert np.all(np.abs(c.normalized) <= divisor_counts(2000))


def test_flipped_coefficient_is_rejected():
    exact = list(tau_coefficients(50).exact)
    exact[5] = -exact[5]  # a(6)
    with pytest.raises(CoefficientError, match="multiplicativity"):
        from_exact(12, exact)


def test_bad_normalisation_and_weight():
    exact = list(tau_coefficients(20).exact)
    with pytest.raises(CoefficientError):
        from_exact(12, [2] + exact[1:])
    with pytest.raises(CoefficientError):
        from_exact(13, exact)
    with pytest.raises(CoefficientError):
        from_exact(12, [])


def test_count_limits():
    with pytest.raises(DomainError):
        tau_coefficients(0)
    with pytest.raises(DomainError):
        tau_coefficients(MAX_GENERATED + 1)


def test_json_round_trip(tmp_path):
    c = tau_coefficients(500)
    path = tmp_path / "tau.json"
    save_coefficients(c, path)
    doc = json.loads(path.read_text())
    assert doc["weight"] == 12 and doc["count"] == 500 and isinstance(doc["exact"][0], str)
    assert load_coefficients(path) == c


def test_load_rejects_bad_files(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(CoefficientError):
        load_coefficients(p)
    p.write_text(json.dumps({"weight": 12, "count": 3, "exact": ["1", "-24"]}))
    with pytest.raises(CoefficientError, match="count"):
        load_coefficients(p)
