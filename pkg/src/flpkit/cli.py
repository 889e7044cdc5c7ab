"""Command-line front end.

Exit codes: 0 success, 1 infeasible or unbounded, 2 usage error, 3 parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import flp as flp_mod
from .flp import (
    DegenerateGoalError,
    FuzzyLinearProgram,
    InfeasibleModelError,
    compare_methods,
    max_satisfaction_solve,
    sweep,
)
from .lp_core import SolverError, check_feasible, solve
from .membership import MembershipRangeError
from .model_io import ModelSource, emit_solution_report, emit_sweep_csv, parse_model

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_USAGE = 2
EXIT_PARSE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise _UsageError(f"{self.prog}: error: {message}")


def default_alpha_grid() -> list[float]:
    return flp_mod.default_alpha_grid()


def _degree(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 < v <= 1.0:
        raise argparse.ArgumentTypeError(f"degree must lie in (0, 1], got {text}")
    return v


def _degree_list(text: str) -> list[float]:
    return [_degree(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _convention(text: str) -> str | float:
    if text in ("lower", "mid", "upper"):
        return text
    return _degree(text)


def _plan(text: str) -> tuple[str, list[float]]:
    label, sep, values = text.partition("=")
    if not sep or not label:
        raise argparse.ArgumentTypeError(f"expected LABEL=v1,v2,..., got {text!r}")
    try:
        return label, [float(v) for v in values.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad plan values in {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="flpkit", description="Fuzzy linear programming with S-curve coefficients.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp: argparse.ArgumentParser, formats: Sequence[str] = ("human", "json", "csv")) -> None:
        sp.add_argument("model", help="model file")
        sp.add_argument("--format", choices=formats, default=formats[0])
        sp.add_argument("-o", "--output", help="output file (directory for sweep)")

    sp = sub.add_parser("solve", help="solve the model defuzzified at fixed degrees")
    common(sp)
    sp.add_argument("--alpha-obj", type=_degree,
                    help="degree for objective coefficients (default: upper interval ends)")
    sp.add_argument("--alpha-con", type=_degree,
                    help="degree for row coefficients (default: upper interval ends)")

    sp = sub.add_parser("fsolve", help="maximize the overall degree of satisfaction")
    common(sp)
    sp.add_argument("--tol", type=_positive, default=1e-6)

    sp = sub.add_parser("sweep", help="solve over the (alpha1, alpha2) grid")
    common(sp, formats=("csv", "json"))
    sp.add_argument("--alphas", type=_degree_list, help="comma-separated degrees")
    sp.add_argument("--m", type=_int_list, action="extend", default=None,
                    help="resolution tag(s); one output per tag")
    sp.add_argument("--workers", type=int, default=None)

    sp = sub.add_parser("compare", help="evaluate given plans under coefficient conventions")
    common(sp)
    sp.add_argument("--x", dest="plans", type=_plan, action="append", required=True,
                    metavar="LABEL=v1,v2,...")
    sp.add_argument("--convention", dest="conventions", type=_convention, action="append",
                    help="lower, mid, upper or a degree (repeatable)")

    sp = sub.add_parser("check", help="parse and validate a model")
    sp.add_argument("model")
    return p


def _load(path: str, err: TextIO) -> FuzzyLinearProgram | int:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        err.write(f"flpkit: cannot read {path}: {exc}\n")
        return EXIT_USAGE
    result = parse_model(ModelSource(text, path))
    for d in result.diagnostics:
        err.write(d.format(path) + "\n")
    if result.model is None:
        return EXIT_PARSE
    return result.model


def _human_solution(model: FuzzyLinearProgram, lp, sol) -> str:
    lines = [f"status: {sol.status}"]
    if sol.status == "optimal":
        lines.append(f"objective: {sol.objective!r}")
        for name, v in zip(lp.variable_names(), sol.x):
            lines.append(f"  {name} = {v!r}")
        lines.append("rows:")
        for r in check_feasible(lp, sol.x):
            state = "tight" if abs(r.slack) <= 1e-6 * max(1.0, abs(r.slack)) else "slack"
            if not r.satisfied:
                state = "VIOLATED"
            lines.append(f"  {r.label:<16} slack {r.slack!r:<24} {state}")
    return "\n".join(lines) + "\n"


def _write(text: str, output: str | None, out: TextIO) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def _cmd_solve(args, model: FuzzyLinearProgram, out: TextIO, err: TextIO) -> int:
    obj = "upper" if args.alpha_obj is None else args.alpha_obj
    con = "upper" if args.alpha_con is None else args.alpha_con
    lp = model.crisp(obj, con, "clamp")
    sol = solve(lp)
    if args.format == "human":
        text = _human_solution(model, lp, sol)
    else:
        text = emit_solution_report(sol, args.format, lp.variable_names())
    _write(text, args.output, out)
    return EXIT_OK if sol.status == "optimal" else EXIT_NO_SOLUTION


def _cmd_fsolve(args, model: FuzzyLinearProgram, out: TextIO, err: TextIO) -> int:
    try:
        res = max_satisfaction_solve(model, args.tol)
    except (DegenerateGoalError, InfeasibleModelError) as exc:
        err.write(f"flpkit: {exc}\n")
        return EXIT_NO_SOLUTION
    except ValueError as exc:
        raise _UsageError(f"flpkit: {exc}") from None
    names = model.variable_names()
    if args.format == "human":
        lines = [
            f"lambda: {res.lam!r}",
            f"objective: {res.achieved_objective!r}",
            f"goal interval: [{res.goal_lo!r}, {res.goal_hi!r}]",
            f"goal at lambda: {res.goal_at_lambda!r}",
            f"bisection steps: {res.iterations}",
        ]
        lines += [f"  {n} = {v!r}" for n, v in zip(names, res.x)]
        text = "\n".join(lines) + "\n"
    else:
        text = emit_solution_report(res, args.format, names)
    _write(text, args.output, out)
    return EXIT_OK


def _summary_table(results) -> str:
    names = results[0].names
    head = ["M", *names, "G(max)", "G(min)"]
    rows = [head]
    for r in results:
        best = [rec for rec in r.records if rec.status == "optimal" and rec.G == r.g_max]
        x = best[0].x if best else (float("nan"),) * len(names)
        rows.append(["" if r.m is None else str(r.m), *(f"{v:.1f}" for v in x),
                     f"{r.g_max:.1f}", f"{r.g_min:.1f}"])
    widths = [max(len(row[i]) for row in rows) for i in range(len(head))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in rows) + "\n"


def _sweep_json(r) -> str:
    return json.dumps({
        "M": r.m,
        "g_max": r.g_max,
        "g_min": r.g_min,
        "records": [
            {"alpha1": rec.alpha1, "alpha2": rec.alpha2, "status": rec.status,
             "G": rec.G if rec.status == "optimal" else None,
             "x": dict(zip(r.names, rec.x)) if rec.status == "optimal" else None}
            for rec in r.records
        ],
    }, indent=2) + "\n"


def _cmd_sweep(args, model: FuzzyLinearProgram, out: TextIO, err: TextIO) -> int:
    tags = args.m or [None]
    results = [sweep(model, args.alphas, m, workers=args.workers) for m in tags]
    ext = "csv" if args.format == "csv" else "json"
    emit = emit_sweep_csv if args.format == "csv" else _sweep_json
    if args.output:
        outdir = Path(args.output)
        outdir.mkdir(parents=True, exist_ok=True)
        for r in results:
            name = "sweep" if r.m is None else f"sweep_M{r.m}"
            (outdir / f"{name}.{ext}").write_text(emit(r), encoding="utf-8")
        out.write(_summary_table(results))
    else:
        for r in results:
            out.write(emit(r))
        err.write(_summary_table(results))
    if any(r.status_counts()["optimal"] == 0 for r in results):
        return EXIT_NO_SOLUTION
    return EXIT_OK


def _cmd_compare(args, model: FuzzyLinearProgram, out: TextIO, err: TextIO) -> int:
    conventions = args.conventions or ["lower", "mid", "upper"]
    for label, x in args.plans:
        if len(x) != model.n:
            raise _UsageError(f"flpkit: plan {label!r} has {len(x)} values, model has {model.n}")
    rows = compare_methods(model, args.plans, conventions)
    if args.format == "json":
        text = json.dumps([
            {"label": r.label, "convention": r.convention, "objective": r.objective,
             "feasible": r.feasible, "violated_rows": list(r.violated_rows)}
            for r in rows
        ], indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "convention", "objective", "feasible", "violated_rows"])
        for r in rows:
            w.writerow([r.label, r.convention, repr(r.objective), str(r.feasible).lower(),
                        ";".join(r.violated_rows)])
        text = buf.getvalue()
    else:
        width = max(len(r.label) for r in rows)
        lines = []
        for r in rows:
            note = "feasible" if r.feasible else "violates " + ", ".join(r.violated_rows)
            lines.append(f"{r.label:<{width}}  {r.convention:<8} {r.objective:>14.3f}  {note}")
        text = "\n".join(lines) + "\n"
    _write(text, args.output, out)
    return EXIT_OK


def run(argv: Sequence[str] | None = None, out: TextIO | None = None,
        err: TextIO | None = None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        model = _load(args.model, err)
        if isinstance(model, int):
            return model
        if args.command == "check":
            out.write(f"ok: {model.n} variables, {len(model.rows)} rows\n")
            return EXIT_OK
        handler = {"solve": _cmd_solve, "fsolve": _cmd_fsolve,
                   "sweep": _cmd_sweep, "compare": _cmd_compare}[args.command]
        return handler(args, model, out, err)
    except _UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        err.write(f"flpkit: {exc}\n")
        return EXIT_USAGE
    except (MembershipRangeError, SolverError) as exc:
        err.write(f"flpkit: {exc}\n")
        return EXIT_NO_SOLUTION


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
