import json

import numpy as np
import pytest

from gramlab.errors import DomainError
from gramlab.gram import gram_point
from gramlab.verify import (
    afe_crosscheck,
    aux_approximation_profile,
    contour_residue_check,
    fit_regime_constants,
    g_aux,
    karatsuba_error_budget,
    karatsuba_main_term,
    residue_at_even_gram,
    residue_by_circle,
    run_suite,
    stationary_phase_In,
    vertical_symmetry_check,
    write_report,
)


def test_contour_identity(ctx):
    rec = contour_residue_check(ctx, 30)
    assert rec.rel_discrepancy <= 1e-6


def test_vertical_symmetry(ctx):
    assert vertical_symmetry_check(ctx, 30).rel_discrepancy <= 1e-8


def test_residue_formula_matches_circle(ctx):
    v = 20
    assert abs(residue_at_even_gram(ctx, v) - residue_by_circle(ctx, v)) <= 1e-8 * abs(residue_at_even_gram(ctx, v))


def test_pole_guard(ctx):
    t = gram_point(ctx, 20).t
    with pytest.raises(DomainError, match="20"):
        g_aux(ctx, 6 + 1j * t)


def test_aux_profile_decays(ctx):
    _, slope = aux_approximation_profile(ctx, np.linspace(30, 300, 12), "G")
    assert slope < 0


def test_afe(ctx):
    for s in (6 + 0j, 6 + 150j, 3 - 40j, 9 + 480j):
        assert afe_crosscheck(ctx, s).rel_discrepancy <= 1e-7


def test_stationary_phase_against_reference():
    val, err = stationary_phase_In(None, 150, 100.0, c=0.5001)
    main = karatsuba_main_term(150, 0.5001)
    assert abs(val - main) <= karatsuba_error_budget(150, 100.0, 0.5001)
    assert err <= 1e-8 * abs(val)


def test_main_term_trend(ctx):
    rel = [abs(stationary_phase_In(ctx, int(1.5 * T), T)[0] / karatsuba_main_term(int(1.5 * T), ctx.c) - 1)
           for T in (50.0, 100.0, 200.0)]
    assert rel[1] <= 0.2 and rel[0] > rel[1] > rel[2]


def test_regime_constants_stable(ctx):
    fit = fit_regime_constants(ctx, (50.0, 100.0))
    for key in ("first", "second"):
        assert max(fit[key]) / min(fit[key]) <= 3


def test_run_suite_and_report(ctx, tmp_path):
    recs = run_suite(ctx, "afe", 30.0)
    path = tmp_path / "report.json"
    write_report(recs, path)
    doc = json.loads(path.read_text())
    assert {r["name"] for r in doc} == {"afe", "l_direct"}
    with pytest.raises(DomainError):
        run_suite(ctx, "nope")
