"""Text model format, sweep CSV and solution reports.

Model files are line oriented, ``#`` starts a comment::

    scurve: B=1 C=0.001 d=13.8
    maximize: ~(1.02,1.08,1.05) x1 + ~(0.2,0.4,0.3) x2 + ~(1.7,2.0,1.8) x3
    subject to:
      cutting: 0.0033 x1 + 0.001 x2 + 0.0033 x3 <= 208
      demand_x1: x1 >= 25000
      x3 >= 5          # unlabelled: a lower bound on x3

``~(lo,hi)`` is a fuzzy coefficient with an S-curve on ``[lo, hi]``;
``~(lo,hi,nominal)`` also records the quoted "around" value used by the
``mid`` convention. Fuzzy coefficients may appear in the objective and in
``<=`` rows.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Literal

from .flp import Coeff, FuzzyCoeff, FuzzyLinearProgram, FuzzyRow, SatisfactionResult, SweepRecord, SweepResult
from .lp_core import ModelError, Solution
from .membership import DEFAULT_B, DEFAULT_C, DEFAULT_D, ParameterError, SCurve

Severity = Literal["error", "warning"]

_DIRECTIVES = ("maximize", "minimize", "subject to", "scurve")
_NUMBER = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_TOKEN = re.compile(
    rf"(?P<ws>\s+)|(?P<num>{_NUMBER})|(?P<ident>[A-Za-z_][A-Za-z0-9_.]*)"
    r"|(?P<rel><=|>=|=)|(?P<op>[+\-*])|(?P<punct>[~(),])"
)
_HEAD = re.compile(r"^\s*(?P<key>[A-Za-z_][A-Za-z0-9_.]*(?:\s+to)?)\s*:")


@dataclass(frozen=True)
class ModelSource:
    text: str
    origin: str = "<string>"


@dataclass(frozen=True)
class ParseDiagnostic:
    severity: Severity
    line: int
    column: int
    message: str

    def format(self, origin: str = "") -> str:
        prefix = f"{origin}:" if origin else ""
        return f"{prefix}{self.line}:{self.column}: {self.severity}: {self.message}"


@dataclass
class ParseResult:
    model: FuzzyLinearProgram | None
    diagnostics: list[ParseDiagnostic] = field(default_factory=list)

    @property
    def errors(self) -> list[ParseDiagnostic]:
        return [d for d in self.diagnostics if d.severity == "error"]

    @property
    def ok(self) -> bool:
        return self.model is not None


class ModelParseError(ValueError):
    def __init__(self, diagnostics: list[ParseDiagnostic], origin: str = ""):
        self.diagnostics = diagnostics
        self.origin = origin
        super().__init__("\n".join(d.format(origin) for d in diagnostics))


class _LineError(Exception):
    def __init__(self, column: int, message: str):
        self.column = column
        self.message = message


@dataclass
class _Tok:
    kind: str
    text: str
    col: int  # 1-based


def _tokenize(text: str, offset: int) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise _LineError(offset + pos + 1, f"unexpected character {text[pos]!r}")
        if m.lastgroup != "ws":
            out.append(_Tok(m.lastgroup, m.group(), offset + pos + 1))
        pos = m.end()
    return out


class _Cursor:
    def __init__(self, toks: list[_Tok], end_col: int):
        self.toks = toks
        self.i = 0
        self.end_col = end_col

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok | None:
        tok = self.peek()
        self.i += 1
        return tok

    def col(self) -> int:
        tok = self.peek()
        return tok.col if tok else self.end_col

    def expect(self, kind: str, text: str | None = None, what: str = "") -> _Tok:
        tok = self.peek()
        if tok is None or tok.kind != kind or (text is not None and tok.text != text):
            found = "end of line" if tok is None else repr(tok.text)
            raise _LineError(self.col(), f"expected {what or text or kind}, found {found}")
        self.i += 1
        return tok


@dataclass
class _Interval:
    lo: float
    hi: float
    nominal: float | None


@dataclass
class _Term:
    coeff: float | _Interval
    var: str
    col: int


def _signed_number(cur: _Cursor, what: str) -> float:
    sign = 1.0
    while (tok := cur.peek()) is not None and tok.kind == "op" and tok.text in "+-":
        cur.next()
        if tok.text == "-":
            sign = -sign
    return sign * float(cur.expect("num", what=what).text)


def _fuzzy(cur: _Cursor) -> tuple[_Interval, int]:
    start = cur.expect("punct", "~").col
    cur.expect("punct", "(")
    lo = _signed_number(cur, "interval lower bound")
    cur.expect("punct", ",")
    hi = _signed_number(cur, "interval upper bound")
    nominal = None
    if (tok := cur.peek()) is not None and tok.text == ",":
        cur.next()
        nominal = _signed_number(cur, "nominal value")
    cur.expect("punct", ")")
    if not lo < hi:
        raise _LineError(start, "fuzzy interval lower bound must be < upper bound")
    if nominal is not None and not lo <= nominal <= hi:
        raise _LineError(start, "nominal value must lie inside the fuzzy interval")
    return _Interval(lo, hi, nominal), start


def _terms(cur: _Cursor, stop_at_rel: bool) -> list[_Term]:
    terms: list[_Term] = []
    seen: set[str] = set()
    first = True
    while True:
        tok = cur.peek()
        if tok is None or (stop_at_rel and tok.kind == "rel"):
            break
        start = tok.col
        sign = 1.0
        signed = False
        while (tok := cur.peek()) is not None and tok.kind == "op" and tok.text in "+-":
            cur.next()
            signed = True
            if tok.text == "-":
                sign = -sign
        if not first and not signed:
            raise _LineError(cur.col(), "expected '+' or '-' between terms")
        tok = cur.peek()
        coeff: float | _Interval
        if tok is None:
            raise _LineError(cur.col(), "expected a term, found end of line")
        if tok.kind == "num":
            coeff = sign * float(cur.next().text)
        elif tok.kind == "punct" and tok.text == "~":
            if sign < 0:
                raise _LineError(tok.col, "a fuzzy coefficient cannot be negated")
            coeff, _ = _fuzzy(cur)
        elif tok.kind == "ident":
            coeff = sign * 1.0
        else:
            raise _LineError(tok.col, f"expected a coefficient or variable, found {tok.text!r}")
        if (tok := cur.peek()) is not None and tok.kind == "op" and tok.text == "*":
            cur.next()
        var = cur.expect("ident", what="a variable name")
        if var.text in seen:
            raise _LineError(var.col, f"variable {var.text!r} appears twice in one expression")
        seen.add(var.text)
        terms.append(_Term(coeff, var.text, start))
        first = False
    if not terms:
        raise _LineError(cur.col(), "expected at least one term")
    return terms


@dataclass
class _Row:
    label: str
    terms: list[_Term]
    relation: str
    rhs: float
    line: int


def parse_model(src: ModelSource | str, origin: str = "<string>") -> ParseResult:
    """Parse model text, collecting every diagnostic instead of stopping at the first."""
    if isinstance(src, str):
        src = ModelSource(src, origin)
    diags: list[ParseDiagnostic] = []
    sense: str | None = None
    objective: list[_Term] = []
    rows: list[_Row] = []
    bounds: dict[str, float] = {}
    params = {"B": DEFAULT_B, "C": DEFAULT_C, "d": DEFAULT_D}
    scurve_line: int | None = None
    in_rows = False
    labels: dict[str, int] = {}
    order: list[str] = []

    def error(line: int, col: int, msg: str) -> None:
        diags.append(ParseDiagnostic("error", line, col, msg))

    lines = src.text.splitlines() or [""]
    for lineno, raw in enumerate(lines, 1):
        body = raw.split("#", 1)[0].rstrip()
        if not body.strip():
            continue
        end_col = len(body) + 1
        head = _HEAD.match(body)
        key = re.sub(r"\s+", " ", head.group("key")).lower() if head else None
        try:
            if key in _DIRECTIVES:
                rest_off = head.end()
                toks = _tokenize(body[rest_off:], rest_off)
                cur = _Cursor(toks, end_col)
                if key in ("maximize", "minimize"):
                    if sense is not None:
                        raise _LineError(head.start("key") + 1, "objective given more than once")
                    objective = _terms(cur, stop_at_rel=False)
                    sense = key
                    in_rows = False
                elif key == "subject to":
                    if toks:
                        raise _LineError(toks[0].col, "rows go on the lines after 'subject to:'")
                    in_rows = True
                else:
                    if scurve_line is not None:
                        raise _LineError(head.start("key") + 1,
                                         f"scurve given more than once (first on line {scurve_line})")
                    scurve_line = lineno
                    _scurve_params(cur, params)
                continue
            if not in_rows:
                if head:
                    raise _LineError(head.start("key") + 1, f"unknown directive {head.group('key')!r}")
                raise _LineError(len(body) - len(body.lstrip()) + 1,
                                 "expected a directive ('maximize:', 'minimize:', 'subject to:', 'scurve:')")
            if head:
                label = head.group("key")
                if " " in label:
                    raise _LineError(head.start("key") + 1, f"bad row label {label!r}")
                rest_off = head.end()
                cur = _Cursor(_tokenize(body[rest_off:], rest_off), end_col)
                terms = _terms(cur, stop_at_rel=True)
                rel = cur.expect("rel", what="'<=', '>=' or '='")
                rhs = _signed_number(cur, "a right-hand side number")
                if cur.peek() is not None:
                    raise _LineError(cur.col(), f"unexpected {cur.peek().text!r} after right-hand side")
                for t in terms:
                    if isinstance(t.coeff, _Interval) and rel.text != "<=":
                        raise _LineError(t.col, "fuzzy coefficients are only allowed in <= rows")
                if label in labels:
                    diags.append(ParseDiagnostic(
                        "warning", lineno, head.start("key") + 1,
                        f"duplicate row label {label!r} (first on line {labels[label]})"))
                else:
                    labels[label] = lineno
                rows.append(_Row(label, terms, rel.text, rhs, lineno))
            else:
                cur = _Cursor(_tokenize(body, 0), end_col)
                var = cur.expect("ident", what="a row label or a bound 'var >= value'")
                rel = cur.expect("rel", ">=", what="'>=' (unlabelled lines are lower bounds)")
                value = _signed_number(cur, "a bound value")
                if cur.peek() is not None:
                    raise _LineError(cur.col(), "unlabelled rows must be simple bounds 'var >= value'")
                if var.text in bounds:
                    diags.append(ParseDiagnostic(
                        "warning", lineno, var.col, f"bound on {var.text!r} given twice; last one wins"))
                bounds[var.text] = value
                if var.text not in order:
                    order.append(var.text)
                del rel
        except _LineError as exc:
            error(lineno, min(max(exc.column, 1), max(end_col, 1)), exc.message)

    if sense is None and not any(d.severity == "error" for d in diags):
        error(1, 1, "missing objective line ('maximize:' or 'minimize:')")

    names: list[str] = []
    for t in objective:
        if t.var not in names:
            names.append(t.var)
    for r in rows:
        for t in r.terms:
            if t.var not in names:
                names.append(t.var)
    for v in order:
        if v not in names:
            names.append(v)

    if any(d.severity == "error" for d in diags):
        return ParseResult(None, diags)

    def coeff(c: float | _Interval) -> Coeff:
        if isinstance(c, _Interval):
            return FuzzyCoeff(SCurve(params["B"], params["C"], params["d"], c.lo, c.hi), c.nominal)
        return c

    def vector(terms: list[_Term]) -> tuple[Coeff, ...]:
        by_var = {t.var: coeff(t.coeff) for t in terms}
        return tuple(by_var.get(v, 0.0) for v in names)

    try:
        model = FuzzyLinearProgram(
            sense=sense,
            objective=vector(objective),
            rows=tuple(FuzzyRow(vector(r.terms), r.relation, r.rhs, r.label) for r in rows),
            var_lower=tuple(bounds.get(v, 0.0) for v in names),
            names=tuple(names),
        )
    except (ModelError, ParameterError) as exc:
        error(1, 1, str(exc))
        return ParseResult(None, diags)
    return ParseResult(model, diags)


def _scurve_params(cur: _Cursor, params: dict[str, float]) -> None:
    seen = set()
    while cur.peek() is not None:
        key = cur.expect("ident", what="a parameter name (B, C or d)")
        if key.text not in ("B", "C", "d"):
            raise _LineError(key.col, f"unknown scurve parameter {key.text!r}")
        if key.text in seen:
            raise _LineError(key.col, f"scurve parameter {key.text!r} given twice")
        seen.add(key.text)
        cur.expect("rel", "=")
        col = cur.col()
        value = _signed_number(cur, "a number")
        if not (math.isfinite(value) and value > 0):
            raise _LineError(col, f"scurve parameter {key.text} must be positive")
        params[key.text] = value
        if (tok := cur.peek()) is not None and tok.kind == "punct" and tok.text == ",":
            cur.next()


def load_model(path: str | Path) -> FuzzyLinearProgram:
    """Read and parse a model file; raises :class:`ModelParseError` on errors."""
    path = Path(path)
    result = parse_model(ModelSource(path.read_text(encoding="utf-8"), str(path)))
    if result.model is None:
        raise ModelParseError(result.errors, str(path))
    return result.model


def bundled_model_path(name: str = "textile") -> Path:
    return Path(__file__).parent / "data" / f"{name}.flp"


def _num(v: float) -> str:
    return repr(float(v))


def _coeff_text(a: Coeff) -> str:
    if isinstance(a, FuzzyCoeff):
        if a.nominal is not None:
            return f"~({_num(a.lower)},{_num(a.upper)},{_num(a.nominal)})"
        return f"~({_num(a.lower)},{_num(a.upper)})"
    return _num(a)


def format_model(flp: FuzzyLinearProgram) -> str:
    """Print ``flp`` in the model format; ``parse_model`` reads it back exactly."""
    names = flp.variable_names()
    fuzzy = flp.fuzzy_coeffs()
    lines = []
    if fuzzy:
        shapes = {(f.curve.B, f.curve.C, f.curve.d) for f in fuzzy}
        if len(shapes) > 1:
            raise ValueError("the model format holds one S-curve shape per model")
        B, C, d = shapes.pop()
        lines.append(f"scurve: B={_num(B)} C={_num(C)} d={_num(d)}")
    terms = " + ".join(f"{_coeff_text(a)} {v}" for a, v in zip(flp.objective, names))
    lines.append(f"{flp.sense}: {terms}")
    lines.append("subject to:")
    for i, row in enumerate(flp.rows):
        parts = [f"{_coeff_text(a)} {v}" for a, v in zip(row.coeffs, names)
                 if isinstance(a, FuzzyCoeff) or a != 0.0]
        if not parts:
            parts = [f"0.0 {names[0]}"]
        label = row.label or f"r{i + 1}"
        lines.append(f"  {label}: {' + '.join(parts)} {row.relation} {_num(row.rhs)}")
    for v, lo in zip(names, flp.var_lower):
        if lo != 0.0:
            lines.append(f"  {v} >= {_num(lo)}")
    return "\n".join(lines) + "\n"


def emit_sweep_csv(r: SweepResult) -> str:
    """Sweep records as CSV with a trailing ``# g_max=..., g_min=...`` summary."""
    names = r.names or tuple(f"x{j + 1}" for j in range(len(r.records[0].x)))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["M", "alpha1", "alpha2", "G", *names])
    m = "" if r.m is None else str(r.m)
    for rec in r.records:
        if rec.status == "optimal":
            w.writerow([m, _num(rec.alpha1), _num(rec.alpha2), _num(rec.G), *map(_num, rec.x)])
        else:
            w.writerow([m, _num(rec.alpha1), _num(rec.alpha2), rec.status, *([""] * len(names))])
    counts = r.status_counts()
    buf.write(
        f"# g_max={_num(r.g_max)}, g_min={_num(r.g_min)}, optimal={counts['optimal']}, "
        f"infeasible={counts['infeasible']}, unbounded={counts['unbounded']}\n"
    )
    return buf.getvalue()


def read_sweep_csv(text: str) -> SweepResult:
    """Inverse of :func:`emit_sweep_csv`."""
    data = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    summary = [ln for ln in text.splitlines() if ln.startswith("#")]
    reader = csv.reader(data)
    header = next(reader)
    names = tuple(header[4:])
    records = []
    m: int | None = None
    for row in reader:
        m = int(row[0]) if row[0] else None
        a1, a2 = float(row[1]), float(row[2])
        if row[3] in ("infeasible", "unbounded"):
            records.append(SweepRecord(a1, a2, row[3], math.nan, (math.nan,) * len(names)))
        else:
            records.append(SweepRecord(a1, a2, "optimal", float(row[3]),
                                       tuple(float(v) for v in row[4:])))
    g_max = g_min = math.nan
    if summary:
        fields = dict(part.strip().split("=", 1) for part in summary[-1][1:].split(","))
        g_max, g_min = float(fields["g_max"]), float(fields["g_min"])
    return SweepResult(m, tuple(records), g_max, g_min, names)


def _report_fields(s: Solution | SatisfactionResult,
                   names: tuple[str, ...] | None) -> dict:
    if isinstance(s, SatisfactionResult):
        names = names or tuple(f"x{j + 1}" for j in range(len(s.x)))
        return {
            "kind": "satisfaction",
            "status": "optimal",
            "lambda": s.lam,
            "objective": s.achieved_objective,
            "goal_lo": s.goal_lo,
            "goal_hi": s.goal_hi,
            "goal_at_lambda": s.goal_at_lambda,
            "iterations": s.iterations,
            "x": dict(zip(names, s.x)),
        }
    x = None
    if s.x is not None:
        names = names or tuple(f"x{j + 1}" for j in range(len(s.x)))
        x = dict(zip(names, s.x))
    return {
        "kind": "solution",
        "status": s.status,
        "objective": s.objective,
        "iterations": s.iterations,
        "x": x,
    }


def _flatten(fields: dict) -> Iterator[tuple[str, object]]:
    for key, value in fields.items():
        if isinstance(value, dict):
            for k, v in value.items():
                yield f"{key}.{k}", v
        else:
            yield key, value


def emit_solution_report(s: Solution | SatisfactionResult, format: str = "json",
                         names: tuple[str, ...] | None = None) -> str:
    """Report a solve as JSON (nested ``x``) or two-column ``field,value`` CSV."""
    fields = _report_fields(s, names)
    if format == "json":
        return json.dumps(fields, indent=2) + "\n"
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        for key, value in _flatten(fields):
            if isinstance(value, float):
                value = _num(value)
            w.writerow([key, "" if value is None else value])
        return buf.getvalue()
    raise ValueError(f"unknown report format {format!r}")
