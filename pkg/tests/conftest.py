from __future__ import annotations

import numpy as np
import pytest

from flpkit import (
    ConstraintRow,
    LinearProgram,
    brute_force_optimum,
    bundled_model_path,
    load_model,
)

TABLE_ROWS = {
    # department: (sheet, pillow case, quilt) hours per unit, monthly hours
    "cutting": ((0.0033, 0.001, 0.0033), 208.0),
    "sewing": ((0.056, 0.025, 0.1), 4368.0),
    "pleating": ((0.0067, 0.004, 0.017), 520.0),
    "packaging": ((0.01, 0.01, 0.01), 780.0),
}
DEMANDS = (25000.0, 40000.0, 10000.0)
UPPER = (1.08, 0.4, 2.0)
LOWER = (1.02, 0.2, 1.7)


def textile_lp(c=UPPER) -> LinearProgram:
    rows = [ConstraintRow(a, "<=", b, name) for name, (a, b) in TABLE_ROWS.items()]
    for j, dmd in enumerate(DEMANDS):
        e = [0.0, 0.0, 0.0]
        e[j] = 1.0
        rows.append(ConstraintRow(tuple(e), ">=", dmd, f"demand{j + 1}"))
    return LinearProgram("maximize", c, tuple(rows))


@pytest.fixture
def textile():
    return load_model(bundled_model_path("textile"))


@pytest.fixture
def eq6_lp():
    return textile_lp()


def random_lp(rng: np.random.Generator, bounded: bool = True) -> LinearProgram:
    """Random LP with <= 4 variables, <= 6 rows, coefficients in [-10, 10], rhs in [0, 100].

    With ``bounded`` the feasible region (if any) is a polytope: the probe
    ``maximize sum(x)`` is not unbounded, and x >= 0 bounds it below.
    """
    while True:
        n = int(rng.integers(1, 5))
        m = int(rng.integers(1, 7))
        rels = rng.choice(["<=", "<=", "<=", "<=", ">=", "="], size=m)
        A = np.round(rng.uniform(-10, 10, (m, n)), 1)
        b = np.round(rng.uniform(0, 100, m), 1)
        rows = tuple(ConstraintRow(tuple(A[i]), str(rels[i]), b[i]) for i in range(m))
        sense = str(rng.choice(["maximize", "minimize"]))
        lp = LinearProgram(sense, tuple(np.round(rng.uniform(-10, 10, n), 1)), rows)
        if not bounded:
            return lp
        probe = brute_force_optimum(LinearProgram("maximize", (1.0,) * n, rows))
        if probe.status != "unbounded":
            return lp
