"""Crisp linear programs and a dense two-phase simplex solver.

Variables are bounded below (``x >= var_lower``, default 0) and rows use one
of ``<=``, ``>=`` or ``=``. The solver shifts variables onto their lower
bounds, flips rows with a negative right-hand side, and runs phase 1 over
artificial variables for every ``>=`` and ``=`` row. Pivoting follows
Bland's rule; ratio-test ties go to the lowest basic variable index.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ._backend import get_kernels

Sense = Literal["maximize", "minimize"]
Relation = Literal["<=", ">=", "="]
Status = Literal["optimal", "infeasible", "unbounded"]

RELATIONS = ("<=", ">=", "=")
FEAS_TOL = 1e-7


class ModelError(ValueError):
    """Malformed model: dimension mismatch, non-finite data, bad relation."""


class SolverError(RuntimeError):
    """The simplex iteration limit was hit."""

    def __init__(self, message: str, *, phase: int, iterations: int, basis: list[int]):
        super().__init__(f"{message} (phase {phase}, {iterations} iterations, basis {basis})")
        self.phase = phase
        self.iterations = iterations
        self.basis = basis


class OracleError(ValueError):
    """The problem is too large for vertex enumeration."""


@dataclass(frozen=True)
class ConstraintRow:
    coeffs: tuple[float, ...]
    relation: Relation
    rhs: float
    label: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(float(a) for a in self.coeffs))
        object.__setattr__(self, "rhs", float(self.rhs))
        if self.relation not in RELATIONS:
            raise ModelError(f"unknown relation {self.relation!r}")
        if not all(math.isfinite(a) for a in self.coeffs) or not math.isfinite(self.rhs):
            raise ModelError(f"row {self.label!r} has non-finite data")


@dataclass(frozen=True)
class LinearProgram:
    sense: Sense
    c: tuple[float, ...]
    rows: tuple[ConstraintRow, ...] = ()
    var_lower: tuple[float, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.sense not in ("maximize", "minimize"):
            raise ModelError(f"sense must be 'maximize' or 'minimize', got {self.sense!r}")
        object.__setattr__(self, "c", tuple(float(v) for v in self.c))
        object.__setattr__(self, "rows", tuple(self.rows))
        n = len(self.c)
        if n == 0:
            raise ModelError("a model needs at least one variable")
        if not all(math.isfinite(v) for v in self.c):
            raise ModelError("objective coefficients must be finite")
        for i, row in enumerate(self.rows):
            if len(row.coeffs) != n:
                raise ModelError(
                    f"row {row.label or i} has {len(row.coeffs)} coefficients, expected {n}"
                )
        lower = (0.0,) * n if self.var_lower is None else tuple(float(v) for v in self.var_lower)
        if len(lower) != n:
            raise ModelError(f"var_lower has length {len(lower)}, expected {n}")
        if not all(math.isfinite(v) for v in lower):
            raise ModelError("variable lower bounds must be finite")
        object.__setattr__(self, "var_lower", lower)
        if self.names is not None:
            names = tuple(self.names)
            if len(names) != n:
                raise ModelError(f"names has length {len(names)}, expected {n}")
            object.__setattr__(self, "names", names)

    @property
    def n(self) -> int:
        return len(self.c)

    def variable_names(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"x{j + 1}" for j in range(self.n))

    def with_objective(self, c: Sequence[float]) -> LinearProgram:
        return LinearProgram(self.sense, tuple(c), self.rows, self.var_lower, self.names)


@dataclass(frozen=True)
class Solution:
    status: Status
    x: tuple[float, ...] | None = None
    objective: float | None = None
    iterations: int = 0


@dataclass(frozen=True)
class RowCheck:
    label: str
    slack: float
    satisfied: bool


@dataclass
class _Tableau:
    T: np.ndarray
    basis: np.ndarray
    n_struct: int
    n_real: int  # structural + slack/surplus columns; artificials follow


def evaluate_objective(c: Sequence[float], x: Sequence[float]) -> float:
    if len(c) != len(x):
        raise ModelError(f"length mismatch: {len(c)} coefficients, {len(x)} values")
    return math.fsum(float(cj) * float(xj) for cj, xj in zip(c, x))


def row_slack(row: ConstraintRow, x: Sequence[float]) -> float:
    """Signed slack; negative means the row is violated by that amount."""
    lhs = math.fsum(a * float(v) for a, v in zip(row.coeffs, x))
    if row.relation == "<=":
        return row.rhs - lhs
    if row.relation == ">=":
        return lhs - row.rhs
    return -abs(lhs - row.rhs)


def check_feasible(lp: LinearProgram, x: Sequence[float], tol: float = FEAS_TOL) -> list[RowCheck]:
    """Per-row slack report. A row is violated iff its slack is below ``-tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    if len(x) != lp.n:
        raise ModelError(f"x has length {len(x)}, model has {lp.n} variables")
    out = []
    for i, row in enumerate(lp.rows):
        s = row_slack(row, x)
        out.append(RowCheck(row.label or f"r{i + 1}", s, s >= -tol))
    return out


def is_feasible(lp: LinearProgram, x: Sequence[float], tol: float = FEAS_TOL) -> bool:
    if any(float(v) < lo - tol for v, lo in zip(x, lp.var_lower)):
        return False
    return all(r.satisfied for r in check_feasible(lp, x, tol))


def _build_tableau(lp: LinearProgram) -> _Tableau:
    n = lp.n
    lower = np.asarray(lp.var_lower)
    A = np.array([r.coeffs for r in lp.rows], dtype=float).reshape(len(lp.rows), n)
    b = np.array([r.rhs for r in lp.rows], dtype=float)
    rels = [r.relation for r in lp.rows]
    if n:
        b = b - A @ lower
    for i in range(len(rels)):
        if b[i] < 0:
            A[i] = -A[i]
            b[i] = -b[i]
            rels[i] = {"<=": ">=", ">=": "<=", "=": "="}[rels[i]]

    m = len(rels)
    n_slack = sum(1 for r in rels if r != "=")
    n_art = sum(1 for r in rels if r != "<=")
    n_real = n + n_slack
    width = n_real + n_art + 1
    T = np.zeros((m + 1, width))
    basis = np.zeros(m, dtype=np.int64)
    T[:m, :n] = A
    T[:m, -1] = b
    s = n
    a = n_real
    for i, rel in enumerate(rels):
        if rel == "<=":
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        elif rel == ">=":
            T[i, s] = -1.0
            s += 1
            T[i, a] = 1.0
            basis[i] = a
            a += 1
        else:
            T[i, a] = 1.0
            basis[i] = a
            a += 1
    return _Tableau(T, basis, n, n_real)


def _iterate(tab: _Tableau, ncols: int, kern, eps: float, tie_tol: float,
             limit: int, phase: int, count: int) -> tuple[str, int]:
    T, basis = tab.T, tab.basis
    cost = T.shape[0] - 1
    while True:
        col = kern.bland_entering(T, cost, ncols, eps)
        if col < 0:
            return "optimal", count
        row = kern.ratio_test(T, col, basis, eps, tie_tol)
        if row < 0:
            return "unbounded", count
        if count >= limit:
            raise SolverError(
                "simplex iteration limit exceeded", phase=phase, iterations=count,
                basis=[int(v) for v in basis],
            )
        kern.pivot(T, row, col)
        basis[row] = col
        count += 1


def solve(
    lp: LinearProgram,
    *,
    feas_tol: float = FEAS_TOL,
    backend: str | None = None,
    max_iter: int | None = None,
) -> Solution:
    """Solve ``lp`` with the two-phase simplex method.

    ``backend`` picks the kernel set (``"compiled"`` or ``"python"``); the
    default is whatever was selected at import.
    """
    kern = get_kernels(backend)
    tab = _build_tableau(lp)
    T, basis = tab.T, tab.basis
    m = basis.shape[0]
    n_real = tab.n_real
    width = T.shape[1] - 1
    limit = max_iter if max_iter is not None else 50 * (m + width + 1)
    eps = 1e-9
    tie_tol = 1e-12
    count = 0

    # phase 1: minimize the sum of artificials
    if width > n_real:
        T[m, :] = 0.0
        for i in range(m):
            if basis[i] >= n_real:
                T[m, :n_real] -= T[i, :n_real]
                T[m, -1] -= T[i, -1]
        rhs_scale = max(1.0, float(np.max(np.abs(T[:m, -1]))) if m else 1.0)
        _, count = _iterate(tab, n_real, kern, eps, tie_tol, limit, 1, count)
        if -T[m, -1] > feas_tol * rhs_scale:
            return Solution("infeasible", iterations=count)
        # drive zero-level artificials out of the basis; drop redundant rows
        keep = []
        for i in range(m):
            if basis[i] < n_real:
                keep.append(i)
                continue
            cand = np.nonzero(np.abs(T[i, :n_real]) > eps)[0]
            if cand.size:
                kern.pivot(T, i, int(cand[0]))
                basis[i] = int(cand[0])
                count += 1
                keep.append(i)
        if len(keep) < m:
            T = np.ascontiguousarray(T[keep + [m], :])
            basis = np.ascontiguousarray(basis[keep])
            m = len(keep)
        # artificial columns can no longer enter; zero them so they stay inert
        T[:, n_real:width] = 0.0
        tab = _Tableau(T, basis, tab.n_struct, n_real)

    # phase 2: minimize -c.y for maximize, c.y for minimize
    c = np.zeros(width)
    sign = -1.0 if lp.sense == "maximize" else 1.0
    c[: lp.n] = sign * np.asarray(lp.c)
    T[m, :] = 0.0
    T[m, :width] = c
    for i in range(m):
        cb = c[basis[i]]
        if cb != 0.0:
            T[m, :] -= cb * T[i, :]
    cscale = max(1.0, float(np.max(np.abs(lp.c))))
    status, count = _iterate(tab, n_real, kern, eps * cscale, tie_tol, limit, 2, count)
    if status == "unbounded":
        return Solution("unbounded", iterations=count)

    y = np.zeros(width)
    for i in range(m):
        y[basis[i]] = T[i, -1]
    x = tuple(float(v) for v in (y[: lp.n] + np.asarray(lp.var_lower)))
    # clean round-off below the lower bound
    x = tuple(max(v, lo) if v < lo and lo - v <= feas_tol else v for v, lo in zip(x, lp.var_lower))
    return Solution("optimal", x, evaluate_objective(lp.c, x), count)


def _oracle_hyperplanes(lp: LinearProgram) -> tuple[np.ndarray, np.ndarray]:
    n = lp.n
    A = [list(r.coeffs) for r in lp.rows] + [list(row) for row in np.eye(n)]
    b = [r.rhs for r in lp.rows] + list(lp.var_lower)
    return np.array(A, dtype=float).reshape(-1, n), np.array(b, dtype=float)


def _enumerate_vertices(A: np.ndarray, b: np.ndarray, feasible) -> list[np.ndarray]:
    n = A.shape[1]
    out = []
    for subset in itertools.combinations(range(A.shape[0]), n):
        M = A[list(subset)]
        if abs(np.linalg.det(M)) < 1e-12 * max(1.0, float(np.max(np.abs(M)))) ** n:
            continue
        try:
            v = np.linalg.solve(M, b[list(subset)])
        except np.linalg.LinAlgError:
            continue
        if np.all(np.isfinite(v)) and feasible(v):
            out.append(v)
    return out


def brute_force_optimum(lp: LinearProgram, tol: float = 1e-7) -> Solution:
    """Exhaustive vertex enumeration; a ground-truth check for tiny LPs.

    Every ``n``-subset of the row and lower-bound hyperplanes is solved and
    the best feasible vertex is kept. Unboundedness is decided separately by
    enumerating the vertices of ``{d >= 0, sum(d) = 1}`` intersected with the
    recession cone and testing whether any improves the objective.
    """
    n = lp.n
    total = len(lp.rows) + n
    if n > 6 or total > 12:
        raise OracleError(
            f"vertex enumeration limited to 6 variables and 12 rows (got {n}, {total})"
        )
    A, b = _oracle_hyperplanes(lp)
    scale = max(1.0, float(np.max(np.abs(b)))) if b.size else 1.0

    def feasible(v: np.ndarray) -> bool:
        return is_feasible(lp, v, tol * scale)

    vertices = _enumerate_vertices(A, b, feasible)
    if not vertices:
        return Solution("infeasible")

    sign = 1.0 if lp.sense == "maximize" else -1.0
    c = np.asarray(lp.c)
    # recession directions normalized onto the unit simplex
    rows = [list(r.coeffs) for r in lp.rows]
    D = np.array(rows + list(np.eye(n)) + [[1.0] * n], dtype=float).reshape(-1, n)
    rhs = np.zeros(D.shape[0])
    rhs[-1] = 1.0

    def direction_ok(dv: np.ndarray) -> bool:
        if np.any(dv < -tol) or abs(dv.sum() - 1.0) > tol:
            return False
        for r in lp.rows:
            ad = float(np.dot(r.coeffs, dv))
            if r.relation == "<=" and ad > tol:
                return False
            if r.relation == ">=" and ad < -tol:
                return False
            if r.relation == "=" and abs(ad) > tol:
                return False
        return True

    rays = _enumerate_vertices(D, rhs, direction_ok)
    cscale = max(1.0, float(np.max(np.abs(c))))
    if any(sign * float(c @ dv) > 1e-9 * cscale for dv in rays):
        return Solution("unbounded")

    best = max(vertices, key=lambda v: sign * float(c @ v))
    x = tuple(float(v) for v in best)
    return Solution("optimal", x, evaluate_objective(lp.c, x))
