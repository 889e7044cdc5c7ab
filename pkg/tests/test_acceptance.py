"""Exit criteria. Each test prints one PASS/FAIL line (visible with ``-s`` or ``-v``)."""
import math
import time

import numpy as np
import pytest

from flpkit import (
    brute_force_optimum,
    bundled_model_path,
    emit_sweep_csv,
    evaluate_objective,
    format_model,
    load_model,
    max_satisfaction_solve,
    mu,
    inverse,
    parse_model,
    read_sweep_csv,
    solve,
    sweep,
)
from flpkit.flp import default_alpha_grid
from flpkit.lp_core import check_feasible
from flpkit.membership import SCurve

from conftest import DEMANDS, TABLE_ROWS, random_lp


@pytest.fixture
def report(capsys):
    def emit(name: str, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        assert ok, detail
    return emit


def test_ac1_midpoint_row(report):
    g = evaluate_objective((1.05, 0.3, 1.8), (33825.16, 40000.00, 9374.760))
    report("AC1 comparison row, nominal coefficients", abs(g - 64390.999) <= 0.05,
           f"G={g:.4f} target 64390.999 +/- 0.05")


def test_ac2_upper_row(report):
    g = evaluate_objective((1.08, 0.4, 2.0), (27766.99, 40000.00, 10233.01))
    report("AC2 comparison row, upper coefficients", abs(g - 66454.369) <= 0.05,
           f"G={g:.4f} target 66454.369 +/- 0.05")


def test_ac3_aspiration_solve(report):
    model = load_model(bundled_model_path("textile"))
    lp = model.crisp("upper")
    t0 = time.perf_counter()
    sol = solve(lp)
    elapsed = time.perf_counter() - t0
    oracle = brute_force_optimum(lp)
    slack = {r.label: r.slack for r in check_feasible(lp, sol.x)}
    checks = [
        sol.status == "optimal" and oracle.status == "optimal",
        abs(sol.objective - oracle.objective) <= 1e-6 * abs(oracle.objective),
        abs(sol.objective - 66454.369) <= 1e-4 * 66454.369,
        abs(slack["pleating"]) <= 1e-7 and abs(slack["packaging"]) <= 1e-7,
        sol.x[1] == pytest.approx(40000.0, abs=1e-7),
        elapsed < 1.0,
    ]
    report("AC3 aspiration solve", all(checks),
           f"G={sol.objective:.6f} oracle={oracle.objective:.6f} x={tuple(round(v, 2) for v in sol.x)} "
           f"pleating/packaging slack={slack['pleating']:.2e}/{slack['packaging']:.2e} t={elapsed:.3f}s")


def test_ac4_oracle_suite(report):
    rng = np.random.default_rng(20240601)
    t0 = time.perf_counter()
    mismatches = []
    statuses = {}
    for k in range(500):
        lp = random_lp(rng)
        a, b = solve(lp), brute_force_optimum(lp)
        statuses[b.status] = statuses.get(b.status, 0) + 1
        if a.status != b.status:
            mismatches.append((k, a.status, b.status))
        elif a.status == "optimal" and abs(a.objective - b.objective) > 1e-6 * max(abs(b.objective), 1e-300) + 1e-12:
            mismatches.append((k, a.objective, b.objective))
    elapsed = time.perf_counter() - t0
    report("AC4 oracle property suite", not mismatches and elapsed < 30.0,
           f"500 LPs {statuses}, mismatches={mismatches[:3]}, t={elapsed:.2f}s")


def test_ac5_membership_suite(report):
    rng = np.random.default_rng(5)
    curves = [SCurve(1.0, 0.001, 13.8, 1.02, 1.08), SCurve(1.0, 0.001, 13.8, 0.2, 0.4),
              SCurve(1.0, 0.001, 13.8, 1.7, 2.0), SCurve(0.8, 0.05, 4.0, -3.0, 7.5)]
    worst_rt = 0.0
    worst_end = 0.0
    for s in curves:
        w = s.v_b - s.v_a
        for v in s.v_a + w * rng.uniform(0.0, 1.0, 1000):
            if s.v_a < v < s.v_b:
                worst_rt = max(worst_rt, abs(inverse(s, mu(s, v)) - v) / w)
        for got, want in ((mu(s, s.v_a), s.B / (1 + s.C)), (mu(s, s.v_b), s.B / (1 + s.C * math.exp(s.d)))):
            worst_end = max(worst_end, abs(got - want) / want)
    top = mu(curves[0], 1.02)
    ok = worst_rt <= 1e-9 and worst_end <= 1e-12 and abs(top - 0.999001) <= 5e-7
    report("AC5 membership suite", ok,
           f"round-trip max {worst_rt:.2e} (x width), endpoints max rel {worst_end:.2e}, mu(v_a)={top:.7f}")


def test_ac6_sweep_monotonicity(report):
    model = load_model(bundled_model_path("textile"))
    t0 = time.perf_counter()
    r = sweep(model, m=748)
    r3 = sweep(model, m=748, alpha3=[0.2, 0.8])
    elapsed = time.perf_counter() - t0
    grid = default_alpha_grid()
    asc = sorted(grid)
    non_increasing = all(
        all(r.at(a, a2).G >= r.at(b, a2).G for a, b in zip(asc, asc[1:])) for a2 in grid)
    strict = all(r.at(0.1111, a2).G > r.at(1.0, a2).G for a2 in grid)
    const_a2 = all(len({r.at(a1, a2).G for a2 in grid}) == 1 for a1 in grid)
    const_a3 = r3 == r
    ok = non_increasing and strict and const_a2 and const_a3 and elapsed < 1.0
    report("AC6 sweep monotonicity", ok,
           f"non-increasing={non_increasing} strict={strict} const(alpha2)={const_a2} "
           f"const(alpha3)={const_a3} G range [{r.g_min:.2f}, {r.g_max:.2f}] t={elapsed:.3f}s")


def test_ac7_satisfaction_certificate(report):
    model = load_model(bundled_model_path("textile"))
    t0 = time.perf_counter()
    res = max_satisfaction_solve(model, 1e-6)
    alt = max_satisfaction_solve(model, 1e-6, bracket=(0.1, 0.95))
    elapsed = time.perf_counter() - t0

    def attains(lam):
        z = res.goal_hi - (res.goal_hi - res.goal_lo) * math.log((1 - lam) / (0.001 * lam)) / 13.8
        sol = solve(model.crisp(lam, lam, "strict"))
        return sol.status == "optimal" and sol.objective >= z

    ok = (0 < res.lam < 1 and attains(res.lam) and not attains(res.lam + 1e-6)
          and abs(res.lam - alt.lam) <= 2e-6 and elapsed < 1.0)
    report("AC7 satisfaction certificate", ok,
           f"lambda*={res.lam:.7f} alt={alt.lam:.7f} goal=[{res.goal_lo:.2f}, {res.goal_hi:.2f}] t={elapsed:.3f}s")


def test_ac8_round_trips(report):
    exact = True
    for name in ("textile", "as-published-eq5"):
        model = load_model(bundled_model_path(name))
        exact &= parse_model(format_model(model)).model == model
    model = load_model(bundled_model_path("textile"))
    r = sweep(model, m=748)
    back = read_sweep_csv(emit_sweep_csv(r))
    bits = [a.G for a in back.records] == [a.G for a in r.records] and back == r
    table = all(
        row.label == name and row.coeffs == coeffs and row.rhs == cap and row.relation == "<="
        for row, (name, (coeffs, cap)) in zip(model.rows, TABLE_ROWS.items())
    ) and tuple(row.rhs for row in model.rows[4:]) == DEMANDS
    report("AC8 round trips", exact and bits and table,
           f"model print/parse exact={exact} sweep CSV bit-identical={bits} table coefficients={table}")
