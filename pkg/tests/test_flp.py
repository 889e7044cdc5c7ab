import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flpkit.flp import (
    DegenerateGoalError,
    FuzzyCoeff,
    FuzzyLinearProgram,
    FuzzyRow,
    InfeasibleModelError,
    compare_methods,
    default_alpha_grid,
    defuzzify_at,
    max_satisfaction_solve,
    sweep,
)
from flpkit.lp_core import ModelError, solve
from flpkit.membership import MembershipRangeError, valid_range

from conftest import LOWER, UPPER, textile_lp

LN1000 = math.log(1000.0)


def m_range(model):
    return valid_range(model.fuzzy_coeffs()[0].curve)


def test_defuzzify_at_extreme_degrees(textile):
    lo, hi = m_range(textile)
    assert defuzzify_at(textile, hi, hi, "clamp").c == LOWER
    assert defuzzify_at(textile, lo, lo, "clamp").c == UPPER
    assert defuzzify_at(textile, 1.0, 1.0, "clamp").c == LOWER
    assert defuzzify_at(textile, 1e-4, 1e-4, "clamp").c == UPPER


def test_defuzzify_half_degree(textile):
    c = defuzzify_at(textile, 0.5, 0.5).c
    # ln((1 - 0.5) / (0.001 * 0.5)) / 13.8 of each interval width above v_a
    expected = tuple(a + (b - a) * LN1000 / 13.8 for a, b in zip(LOWER, UPPER))
    assert c == pytest.approx(expected, rel=1e-14)
    assert c == pytest.approx((1.05003, 0.30011, 1.85017), abs=1e-5)


def test_defuzzify_strict_out_of_range(textile):
    with pytest.raises(MembershipRangeError):
        defuzzify_at(textile, 1.0, 0.5, "strict")
    with pytest.raises(ValueError):
        defuzzify_at(textile, 0.0, 0.5)


def test_crisp_rows_pass_through(textile):
    lp = defuzzify_at(textile, 0.3, 0.3)
    assert [r.coeffs for r in lp.rows] == [r.coeffs for r in textile_lp().rows]


def test_fuzzy_only_in_le_rows():
    f = FuzzyCoeff.between(1.0, 2.0)
    with pytest.raises(ModelError, match="only allowed in <= rows"):
        FuzzyLinearProgram("maximize", (1.0,), (FuzzyRow((f,), ">=", 1.0),))
    with pytest.raises(ModelError):
        FuzzyCoeff.between(1.0, 2.0, nominal=3.0)


def test_default_alpha_grid():
    g = default_alpha_grid()
    assert len(g) == 9
    assert g[3] == 0.25
    assert all(a > b for a, b in zip(g, g[1:]))
    assert g == pytest.approx([1 / k for k in range(1, 10)], abs=5e-5)


def test_textile_sweep_trends(textile):
    r = sweep(textile, m=748)
    assert r.m == 748
    assert len(r.records) == 81
    keys = [(rec.alpha1, rec.alpha2) for rec in r.records]
    assert keys == sorted(keys, reverse=True)
    for a2 in default_alpha_grid():
        row = [r.at(a1, a2).G for a1 in default_alpha_grid()]
        assert all(x <= y for x, y in zip(row, row[1:]))
        assert r.at(0.1111, a2).G > r.at(1.0, a2).G
    for a1 in default_alpha_grid():
        assert len({r.at(a1, a2).G for a2 in default_alpha_grid()}) == 1
    assert r.g_max == max(rec.G for rec in r.records)
    assert r.g_min == min(rec.G for rec in r.records)
    assert len({rec.x for rec in r.records}) == 1


def test_sweep_endpoints_match_crisp_solves(textile):
    lo, hi = m_range(textile)
    r = sweep(textile, [hi, lo])
    assert r.at(hi, hi).G == solve(textile.crisp("lower")).objective
    assert r.at(lo, lo).G == solve(textile_lp()).objective


def test_sweep_without_fuzziness_is_constant():
    model = FuzzyLinearProgram("maximize", (3.0, 2.0), (FuzzyRow((1.0, 1.0), "<=", 4.0),))
    r = sweep(model, [1.0, 0.5, 0.25])
    assert len({rec.G for rec in r.records}) == 1
    assert r.g_max == r.g_min == 12.0


def test_sweep_records_infeasible_points():
    model = FuzzyLinearProgram(
        "maximize", (FuzzyCoeff.between(1.0, 2.0),),
        (FuzzyRow((1.0,), "<=", 1.0), FuzzyRow((1.0,), ">=", 2.0)))
    r = sweep(model, [1.0, 0.5])
    assert r.status_counts() == {"optimal": 0, "infeasible": 4, "unbounded": 0}
    assert math.isnan(r.g_max)


def test_sweep_parallel_matches_serial(textile):
    assert sweep(textile, workers=4) == sweep(textile)


def test_sweep_alpha3_is_a_no_op(textile):
    assert sweep(textile, [1.0, 0.5], alpha3=[0.1, 0.9]) == sweep(textile, [1.0, 0.5])


def _fuzzy_row_model(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    obj = tuple(FuzzyCoeff.between(a, a + w) for a, w in zip(rng.uniform(0.5, 5, n), rng.uniform(0.1, 2, n)))
    rows = []
    for _ in range(int(rng.integers(1, 4))):
        coeffs = tuple(
            FuzzyCoeff.between(a, a + w) if rng.random() < 0.5 else float(a)
            for a, w in zip(rng.uniform(0.5, 5, n), rng.uniform(0.1, 2, n))
        )
        rows.append(FuzzyRow(coeffs, "<=", float(rng.uniform(10, 100))))
    return FuzzyLinearProgram("maximize", obj, tuple(rows))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_monotone_in_both_degrees(seed):
    model = _fuzzy_row_model(seed)
    grid = [1.0, 0.6, 0.3, 0.1, 0.01]
    r = sweep(model, grid)
    asc = sorted(grid)
    for a2 in grid:
        g = [r.at(a1, a2).G for a1 in asc]
        assert all(x >= y - 1e-9 * abs(y) for x, y in zip(g, g[1:]))
    for a1 in grid:
        g = [r.at(a1, a2).G for a2 in asc]
        assert all(x <= y + 1e-9 * abs(y) for x, y in zip(g, g[1:]))


def _lambda_closed_form(C=0.001, d=13.8):
    # objective and target cross halfway along the goal interval
    return 1.0 / (1.0 + C * math.exp(d / 2))


def _attains(model, res, lam):
    z = res.goal_hi - (res.goal_hi - res.goal_lo) * math.log((1 - lam) / (0.001 * lam)) / 13.8
    sol = solve(model.crisp(lam, lam, "strict"))
    return sol.status == "optimal" and sol.objective >= z


def test_satisfaction_certificate(textile):
    res = max_satisfaction_solve(textile, 1e-6)
    assert 0.0 < res.lam < 1.0
    assert res.goal_hi == pytest.approx(66454.37, abs=5e-3)
    assert res.goal_lo == solve(textile.crisp("lower")).objective
    assert _attains(textile, res, res.lam)
    assert not _attains(textile, res, res.lam + 1e-6)
    assert res.lam == pytest.approx(_lambda_closed_form(), abs=1e-6)
    assert res.achieved_objective >= res.goal_at_lambda
    assert res.x == pytest.approx((27766.99, 40000.0, 10233.01), abs=5e-3)


def test_satisfaction_bracket_independence(textile):
    lo, hi = m_range(textile)
    a = max_satisfaction_solve(textile, 1e-6)
    b = max_satisfaction_solve(textile, 1e-6, bracket=(0.2, 0.9))
    c = max_satisfaction_solve(textile, 1e-6, bracket=(lo, 0.7))
    assert abs(a.lam - b.lam) <= 2e-6 and abs(a.lam - c.lam) <= 2e-6
    with pytest.raises(ValueError):
        max_satisfaction_solve(textile, 1e-6, bracket=(0.6, 0.9))


def test_satisfaction_tiny_intervals_is_scale_free():
    width = 1e-9
    model = FuzzyLinearProgram(
        "maximize",
        (FuzzyCoeff.between(1.0, 1.0 + width), FuzzyCoeff.between(2.0, 2.0 + 2 * width)),
        (FuzzyRow((1.0, 1.0), "<=", 10.0), FuzzyRow((1.0, 0.0), "<=", 4.0)),
    )
    res = max_satisfaction_solve(model, 1e-6)
    assert res.lam == pytest.approx(_lambda_closed_form(), abs=1e-6)


def test_satisfaction_errors():
    f = FuzzyCoeff.between(1.0, 2.0)
    flat = FuzzyLinearProgram("maximize", (f,), (FuzzyRow((1.0,), "<=", 0.0),))
    with pytest.raises(DegenerateGoalError):
        max_satisfaction_solve(flat)
    infeasible = FuzzyLinearProgram(
        "maximize", (f,), (FuzzyRow((1.0,), "<=", 1.0), FuzzyRow((1.0,), ">=", 2.0)))
    with pytest.raises(InfeasibleModelError):
        max_satisfaction_solve(infeasible)
    crisp = FuzzyLinearProgram("maximize", (1.0,), (FuzzyRow((1.0,), "<=", 1.0),))
    with pytest.raises(ValueError):
        max_satisfaction_solve(crisp)
    model = FuzzyLinearProgram("maximize", (f,), (FuzzyRow((1.0,), "<=", 1.0),))
    with pytest.raises(ValueError):
        max_satisfaction_solve(model, tol=0.5)


def test_compare_methods_table_rows(textile):
    rows = compare_methods(
        textile,
        [("Irfan", (33825.16, 40000.00, 9374.760)), ("Atanu", (27766.99, 40000.00, 10233.01))],
        ["lower", "mid", "upper"],
    )
    table = {(r.label, r.convention): r for r in rows}
    assert table["Irfan", "mid"].objective == pytest.approx(64390.999, abs=0.05)
    assert table["Atanu", "upper"].objective == pytest.approx(66454.369, abs=0.05)
    assert table["Atanu", "upper"].feasible
    assert not table["Irfan", "mid"].feasible
    assert set(table["Irfan", "mid"].violated_rows) == {"pleating", "packaging", "demand_quilts"}
    for label in ("Irfan", "Atanu"):
        assert table[label, "lower"].objective <= table[label, "upper"].objective
    with pytest.raises(ModelError):
        compare_methods(textile, [("bad", (1.0, 2.0))])


@given(st.lists(st.floats(0, 1e5), min_size=3, max_size=3))
def test_compare_lower_below_upper(x):
    from flpkit import bundled_model_path, load_model

    model = load_model(bundled_model_path())
    rows = compare_methods(model, [("p", x)], ["lower", 0.5, "upper"])
    lower, half, upper = (r.objective for r in rows)
    assert lower <= half <= upper
