"""Fuzzy linear programs: defuzzification, satisfaction solve and alpha sweeps.

Fuzzy coefficients are S-curves; crispifying one at degree ``m`` picks the
value whose membership is ``m``. Higher degrees give smaller (more
conservative) coefficients. Fuzzy entries may appear in the objective and
in ``<=`` rows only.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal, Sequence, Union

from .lp_core import (
    ConstraintRow,
    LinearProgram,
    ModelError,
    Relation,
    Sense,
    Solution,
    check_feasible,
    evaluate_objective,
    solve,
)
from .membership import (
    MembershipRangeError,
    Policy,
    SCurve,
    inverse_with_flag,
    valid_range,
)

Convention = Union[Literal["lower", "mid", "upper"], float]


class DegenerateGoalError(ValueError):
    """The aspiration interval collapsed (goal_lo >= goal_hi)."""


class InfeasibleModelError(ValueError):
    """A defuzzified model has no solution where one is required."""


@dataclass(frozen=True)
class FuzzyCoeff:
    """S-curve coefficient; ``nominal`` is the quoted "around" value, if any."""

    curve: SCurve
    nominal: float | None = None

    def __post_init__(self) -> None:
        if self.nominal is not None and not (self.curve.v_a <= self.nominal <= self.curve.v_b):
            raise ModelError(
                f"nominal value {self.nominal} outside [{self.curve.v_a}, {self.curve.v_b}]"
            )

    @classmethod
    def between(cls, lo: float, hi: float, nominal: float | None = None,
                **params: float) -> FuzzyCoeff:
        return cls(SCurve.between(lo, hi, **params), nominal)

    @property
    def lower(self) -> float:
        return self.curve.v_a

    @property
    def upper(self) -> float:
        return self.curve.v_b

    @property
    def mid(self) -> float:
        if self.nominal is not None:
            return self.nominal
        return 0.5 * (self.curve.v_a + self.curve.v_b)

    def at(self, m: float, policy: Policy = "clamp") -> float:
        return inverse_with_flag(self.curve, m, policy)[0]


Coeff = Union[float, FuzzyCoeff]


@dataclass(frozen=True)
class FuzzyRow:
    coeffs: tuple[Coeff, ...]
    relation: Relation
    rhs: float
    label: str | None = None

    @property
    def is_fuzzy(self) -> bool:
        return any(isinstance(a, FuzzyCoeff) for a in self.coeffs)


@dataclass(frozen=True)
class FuzzyLinearProgram:
    sense: Sense
    objective: tuple[Coeff, ...]
    rows: tuple[FuzzyRow, ...] = ()
    var_lower: tuple[float, ...] | None = None
    names: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.objective)
        object.__setattr__(self, "objective", tuple(_norm(a) for a in self.objective))
        object.__setattr__(self, "rows", tuple(self.rows))
        for i, row in enumerate(self.rows):
            if len(row.coeffs) != n:
                raise ModelError(
                    f"row {row.label or i} has {len(row.coeffs)} coefficients, expected {n}"
                )
            if row.is_fuzzy and row.relation != "<=":
                raise ModelError(
                    f"row {row.label or i}: fuzzy coefficients are only allowed in <= rows"
                )
        lower = (0.0,) * n if self.var_lower is None else tuple(float(v) for v in self.var_lower)
        object.__setattr__(self, "var_lower", lower)
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        # let the crisp model validate dimensions, finiteness and sense
        self.crisp("lower")

    @property
    def n(self) -> int:
        return len(self.objective)

    def fuzzy_coeffs(self) -> list[FuzzyCoeff]:
        out = [a for a in self.objective if isinstance(a, FuzzyCoeff)]
        for row in self.rows:
            out.extend(a for a in row.coeffs if isinstance(a, FuzzyCoeff))
        return out

    def crisp(self, obj: Convention, con: Convention | None = None,
              policy: Policy = "clamp") -> LinearProgram:
        """Crisp model with objective entries at ``obj`` and row entries at ``con``.

        A convention is ``"lower"``, ``"upper"`` (interval ends), ``"mid"``
        (nominal value, else the interval midpoint) or a membership degree.
        """
        con = obj if con is None else con
        c = tuple(_crisp(a, obj, policy) for a in self.objective)
        rows = tuple(
            ConstraintRow(tuple(_crisp(a, con, policy) for a in r.coeffs), r.relation, r.rhs, r.label)
            for r in self.rows
        )
        return LinearProgram(self.sense, c, rows, self.var_lower, self.names)

    def variable_names(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(f"x{j + 1}" for j in range(self.n))


def _norm(a: Coeff) -> Coeff:
    return a if isinstance(a, FuzzyCoeff) else float(a)


def _crisp(a: Coeff, conv: Convention, policy: Policy) -> float:
    if not isinstance(a, FuzzyCoeff):
        return a
    if conv == "lower":
        return a.lower
    if conv == "upper":
        return a.upper
    if conv == "mid":
        return a.mid
    if isinstance(conv, str):
        raise ValueError(f"unknown convention {conv!r}")
    return a.at(float(conv), policy)


def _check_degree(m: float, what: str) -> None:
    if not (0.0 < m <= 1.0):
        raise ValueError(f"{what} must lie in (0, 1], got {m!r}")


def defuzzify_at(flp: FuzzyLinearProgram, alpha_obj: float, alpha_con: float,
                 policy: Policy = "strict") -> LinearProgram:
    """Replace objective fuzzy entries by their value at ``alpha_obj`` and
    ``<=``-row entries by their value at ``alpha_con``."""
    _check_degree(alpha_obj, "alpha_obj")
    _check_degree(alpha_con, "alpha_con")
    return flp.crisp(alpha_obj, alpha_con, policy)


def default_alpha_grid() -> list[float]:
    """The harmonic degrees 1, 1/2, ..., 1/9 at four decimals."""
    return [1.0, 0.5, 0.3333, 0.25, 0.2, 0.1667, 0.1429, 0.125, 0.1111]


@dataclass(frozen=True)
class SweepRecord:
    alpha1: float
    alpha2: float
    status: str
    G: float
    x: tuple[float, ...]


@dataclass(frozen=True)
class SweepResult:
    m: int | None
    records: tuple[SweepRecord, ...]
    g_max: float
    g_min: float
    names: tuple[str, ...] = ()

    def status_counts(self) -> dict[str, int]:
        counts = {"optimal": 0, "infeasible": 0, "unbounded": 0}
        for r in self.records:
            counts[r.status] += 1
        return counts

    def at(self, alpha1: float, alpha2: float) -> SweepRecord:
        for r in self.records:
            if r.alpha1 == alpha1 and r.alpha2 == alpha2:
                return r
        raise KeyError((alpha1, alpha2))


def sweep(flp: FuzzyLinearProgram, alphas: Sequence[float] | None = None,
          m: int | None = None, *, alpha3: Sequence[float] | None = None,
          workers: int | None = None, backend: str | None = None) -> SweepResult:
    """Solve the model over the grid ``alphas x alphas`` of (objective, row) degrees.

    Each point is defuzzified under the clamp policy. ``m`` is a resolution
    tag carried into the result. ``alpha3`` is accepted for interface parity
    and has no effect. Infeasible or unbounded points are kept with their
    status and ``G = nan``; extrema are taken over optimal points.
    """
    del alpha3
    grid = sorted(set(float(a) for a in (default_alpha_grid() if alphas is None else alphas)),
                  reverse=True)
    if not grid:
        raise ValueError("alpha grid is empty")
    for a in grid:
        _check_degree(a, "alpha")
    points = [(a1, a2) for a1 in grid for a2 in grid]

    def run(point: tuple[float, float]) -> SweepRecord:
        a1, a2 = point
        sol = solve(flp.crisp(a1, a2, "clamp"), backend=backend)
        if sol.status != "optimal":
            return SweepRecord(a1, a2, sol.status, math.nan, (math.nan,) * flp.n)
        return SweepRecord(a1, a2, sol.status, sol.objective, sol.x)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            records = tuple(pool.map(run, points))
    else:
        records = tuple(run(p) for p in points)
    values = [r.G for r in records if r.status == "optimal"]
    g_max = max(values) if values else math.nan
    g_min = min(values) if values else math.nan
    return SweepResult(m, records, g_max, g_min, flp.variable_names())


@dataclass(frozen=True)
class SatisfactionResult:
    lam: float
    x: tuple[float, ...]
    achieved_objective: float
    goal_lo: float
    goal_hi: float
    iterations: int
    goal_at_lambda: float


def goal_curve(flp: FuzzyLinearProgram, goal_lo: float, goal_hi: float) -> SCurve:
    """S-curve over the aspiration interval with the model's shape parameters."""
    ref = flp.fuzzy_coeffs()[0].curve
    return SCurve(ref.B, ref.C, ref.d, goal_lo, goal_hi)


def goal_value(curve: SCurve, lam: float) -> float:
    """Objective level whose satisfaction is ``lam``; satisfaction rises with the objective."""
    v, _ = inverse_with_flag(curve, lam, "strict")
    return curve.v_a + curve.v_b - v


def _attains(flp: FuzzyLinearProgram, curve: SCurve, lam: float,
             backend: str | None) -> tuple[bool, Solution, float]:
    target = goal_value(curve, lam)
    sol = solve(flp.crisp(lam, lam, "strict"), backend=backend)
    if sol.status != "optimal":
        return False, sol, target
    return sol.objective >= target, sol, target


def max_satisfaction_solve(flp: FuzzyLinearProgram, tol: float = 1e-6, *,
                           bracket: tuple[float, float] | None = None,
                           max_iter: int = 60, backend: str | None = None) -> SatisfactionResult:
    """Largest common degree ``lam`` at which the defuzzified model meets its goal.

    The goal interval runs from the optimum with every fuzzy entry at its
    lower end (``goal_lo``) to the optimum with every entry at its upper end
    (``goal_hi``). A goal S-curve with the model's B, C, d maps each ``lam``
    to a target objective that rises with ``lam``, while the defuzzified
    optimum falls with it. Bisection finds the crossing.
    """
    if not (0.0 < tol < 0.1):
        raise ValueError(f"tol must lie in (0, 0.1), got {tol!r}")
    if not any(isinstance(a, FuzzyCoeff) for a in flp.objective):
        raise ValueError("the objective has no fuzzy coefficients")
    if flp.sense != "maximize":
        raise ValueError("satisfaction solve is defined for maximization models")

    lo_sol = solve(flp.crisp("lower"), backend=backend)
    hi_sol = solve(flp.crisp("upper"), backend=backend)
    for tag, sol in (("lower", lo_sol), ("upper", hi_sol)):
        if sol.status != "optimal":
            raise InfeasibleModelError(f"model with {tag} coefficients is {sol.status}")
    goal_lo, goal_hi = lo_sol.objective, hi_sol.objective
    if not goal_lo < goal_hi:
        raise DegenerateGoalError(f"goal interval is empty: [{goal_lo}, {goal_hi}]")
    curve = goal_curve(flp, goal_lo, goal_hi)

    m_lo, m_hi = valid_range(curve)
    for coeff in flp.fuzzy_coeffs():
        c_lo, c_hi = valid_range(coeff.curve)
        m_lo, m_hi = max(m_lo, c_lo), min(m_hi, c_hi)
    lo, hi = (m_lo, m_hi) if bracket is None else bracket
    if not (m_lo <= lo < hi <= m_hi):
        raise MembershipRangeError(f"bracket ({lo}, {hi}) is outside [{m_lo}, {m_hi}]")

    ok, sol, target = _attains(flp, curve, lo, backend)
    if not ok:
        if sol.status == "infeasible":
            raise InfeasibleModelError(f"defuzzified model is infeasible at degree {lo}")
        raise ValueError(f"goal is not attained at the bracket's low end {lo}")
    best = (lo, sol, target)
    hit, sol, target = _attains(flp, curve, hi, backend)
    if hit:
        return SatisfactionResult(hi, sol.x, sol.objective, goal_lo, goal_hi, 0, target)

    iterations = 0
    while hi - lo > tol and iterations < max_iter:
        mid = 0.5 * (lo + hi)
        ok, sol, target = _attains(flp, curve, mid, backend)
        if ok:
            lo = mid
            best = (mid, sol, target)
        else:
            hi = mid
        iterations += 1
    lam, sol, target = best
    return SatisfactionResult(lam, sol.x, sol.objective, goal_lo, goal_hi, iterations, target)


@dataclass(frozen=True)
class ComparisonRow:
    label: str
    convention: str
    objective: float
    feasible: bool
    violated_rows: tuple[str, ...]


def compare_methods(flp: FuzzyLinearProgram, x_list: Sequence[tuple[str, Sequence[float]]],
                    conventions: Sequence[Convention] = ("lower", "mid", "upper"),
                    tol: float = 1e-3) -> list[ComparisonRow]:
    """Objective and feasibility of each labelled plan under each coefficient convention.

    The default row tolerance absorbs plans quoted to two decimals.
    """
    out = []
    for label, x in x_list:
        if len(x) != flp.n:
            raise ModelError(f"plan {label!r} has {len(x)} values, model has {flp.n} variables")
        for conv in conventions:
            lp = flp.crisp(conv, conv, "clamp")
            report = check_feasible(lp, x, tol)
            bad = tuple(r.label for r in report if not r.satisfied)
            bad += tuple(
                name for name, v, lo in zip(lp.variable_names(), x, lp.var_lower) if v < lo - tol
            )
            out.append(ComparisonRow(label, str(conv), evaluate_objective(lp.c, x),
                                     not bad, bad))
    return out
