"""Command-line interface: ``hypcompact <command> [options]``.

Commands: check-action, smoothness, holder, geodesic, pullback, symbolic.
A one-line summary goes to stdout; the full report (config, version and
evidence) is written to ``--out`` as JSON or CSV (``--out -`` writes it to
stdout and moves the summary to stderr).  Exit codes: 0 pass, 1
violation, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import __version__
from .actions import CompactifiedAction
from .diagnostics import (
    Geodesic,
    action_axiom_suite,
    boundary_conjugacy,
    boundary_field_suite,
    boundary_pairs,
    classify_smoothness,
    endpoints_under,
    flatness_order,
    holder_exponent,
    transversality_check,
)
from .fields import BoundaryExtensionFailure, pullback_field, reparam_numeric_field
from .lorentz import generator
from .models import INFINITY
from .reparam import OutOfRangeError, parse_fspec
from .sampling import random_chart_point
from .symbolic import (
    ParseError,
    format_monomial,
    format_term,
    is_analytic,
    is_boundary_tangent,
    non_analytic_terms,
    parse_field,
    pullback_monomial,
)

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

DEFAULT_TOLERANCES = {
    "composition": 1e-9,
    "identity": 1e-9,
    "boundary": 1e-10,
    "field": 1e-7,
    "cauchy": 1e-6,
    "angle": 1e-3,
    "smooth_rtol": 1e-3,
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 3
    seed: int = 0
    f_spec: str = "p=2"
    tolerances: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    out: str | None = None
    format: str = "json"
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 2:
            raise UsageError(f"--n must be >= 2, got {self.n}")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise UsageError(f"tolerance {name} must be > 0, got {value}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"--format must be json or csv, got {self.format!r}")

    def rng(self, *stream: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, *stream])

    def to_dict(self) -> dict:
        """Everything that determines the report contents (not its location)."""
        out = asdict(self)
        del out["out"]
        return out


# --- commands ---------------------------------------------------------------------


def _reparam(config: RunConfig):
    try:
        return parse_fspec(config.f_spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_check_action(config: RunConfig):
    f = _reparam(config)
    tol = config.tolerances
    samples = int(config.options.get("samples", 1000))
    suites = []
    ok = True
    for i, action in enumerate([CompactifiedAction.proj(), CompactifiedAction.conf(), CompactifiedAction.reparam(f)]):
        report = action_axiom_suite(action, config.n, config.rng(i), samples)
        passed = report.passed(tol["composition"], tol["identity"], tol["boundary"])
        ok &= passed
        suites.append({**report.to_dict(), "passed": passed})
    fields = boundary_field_suite(f, config.n, config.rng(99))
    status = "fail" if not ok else ("flagged" if not fields.extends else "pass")
    summary = f"check-action {status}: " + ", ".join(f"{s['label']} {'ok' if s['passed'] else 'FAIL'}" for s in suites)
    if not fields.extends:
        summary += f"; boundary fields flagged for {f.name}"
    results = {"suites": suites, "boundary_fields": fields.to_dict()}
    return (EXIT_PASS if ok else EXIT_VIOLATION), status, summary, results, suites


def cmd_smoothness(config: RunConfig):
    f = _reparam(config)
    k_max = int(config.options.get("k_max", 5))
    smooth = classify_smoothness(f.f_over_fprime, k_max=k_max, rtol=config.tolerances["smooth_rtol"])
    flat = flatness_order(f, k_max=k_max)
    summary = f"smoothness of f/f' for {f.name}: {smooth.verdict}; flatness: {flat.verdict}"
    results = {"smoothness": smooth.to_dict(), "flatness": flat.to_dict()}
    return EXIT_PASS, "pass", summary, results, smooth.rows()


def cmd_holder(config: RunConfig):
    src, dst = config.options.get("source", "conf"), config.options.get("target", "proj")
    try:
        phi = boundary_conjugacy(src, dst)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pairs = boundary_pairs(config.rng(0), config.n, int(config.options.get("pairs", 200)))
    est = holder_exponent(phi, pairs)
    rows = []
    for u, v in pairs:
        rows.append({"du": float(np.linalg.norm(u - v)), "dphi": float(np.linalg.norm(phi(u) - phi(v)))})
    summary = f"holder {src}<-{dst}: slope {est.slope:.4f}, residual {est.residual:.4f}, exponent {est.exponent:.4f}"
    return EXIT_PASS, "pass", summary, est.to_dict(), rows


def cmd_geodesic(config: RunConfig):
    f = _reparam(config)
    count = int(config.options.get("random", 10))
    rng = config.rng(0)
    tol = config.tolerances
    entries, rows = [], []
    ok = True
    for i in range(count):
        geo = Geodesic.random(rng, config.n)
        ends = endpoints_under(f, geo, tol=tol["cauchy"])
        trans = transversality_check(f, geo, tol=tol["angle"])
        good = all(ends.converged) and ends.distinct
        ok &= good
        entries.append({"geodesic": geo.to_dict(), "endpoints": ends.to_dict(), "transversality": trans.to_dict(), "passed": good})
        row = {"index": i, "converged": all(ends.converged), "distinct": ends.distinct, "angle": trans.angle}
        for side, lim in zip(("start", "end"), ends.limits):
            row[side] = "inf" if lim is INFINITY else " ".join(f"{c:.12g}" for c in lim)
        rows.append(row)
    converged = sum(e["passed"] for e in entries)
    summary = f"geodesic {f.name}: {converged}/{count} endpoint pairs convergent and distinct"
    return (EXIT_PASS if ok else EXIT_VIOLATION), ("pass" if ok else "fail"), summary, {"geodesics": entries}, rows


def cmd_pullback(config: RunConfig):
    f = _reparam(config)
    tag = config.options.get("generator", "H")
    try:
        x = generator(tag, config.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rng = config.rng(0)
    count = int(config.options.get("points", 20))
    rows, worst, failures = [], 0.0, 0
    for i in range(count):
        q = random_chart_point(rng, config.n, f, boundary=(i % 5 == 4))
        v = pullback_field(f, x, q)
        row = {"point": " ".join(f"{c:.12g}" for c in q)}
        if isinstance(v, BoundaryExtensionFailure):
            failures += 1
            row.update(vector="", oracle_error="", failure=v.reason)
        else:
            err = ""
            if q[-1] > 0:
                try:
                    err = float(np.max(np.abs(reparam_numeric_field(f, x, q) - v)) / max(1.0, float(np.max(np.abs(v)))))
                    worst = max(worst, err)
                except OutOfRangeError:
                    err = ""
            row.update(vector=" ".join(f"{c:.12g}" for c in v), oracle_error=err, failure="")
        rows.append(row)
    ok = worst <= config.tolerances["field"]
    status = "fail" if not ok else ("flagged" if failures else "pass")
    summary = f"pullback {tag} by {f.name}: max oracle discrepancy {worst:.2e}; boundary failures {failures}"
    results = {"generator": tag, "max_oracle_error": worst, "boundary_failures": failures, "points": rows}
    return (EXIT_PASS if ok else EXIT_VIOLATION), status, summary, results, rows


def cmd_symbolic(config: RunConfig):
    text = config.options.get("field")
    path = config.options.get("file")
    if (text is None) == (path is None):
        raise UsageError("give exactly one of --field or --file")
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc}") from None
    p = int(config.options.get("p", 2))
    if p < 1:
        raise UsageError(f"--p must be a positive integer, got {p}")
    try:
        x = parse_field(text, config.n)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from None
    pulled = pullback_monomial(x, p)
    bad = non_analytic_terms(pulled)
    if bad:
        summary = "non-analytic: " + ", ".join(f"term {format_monomial(t, pulled.n)}" for t in bad)
    else:
        summary = f"analytic: {pulled}"
    results = {
        "input": str(x),
        "p": p,
        "pullback": str(pulled),
        "pullback_json": pulled.to_dict(),
        "analytic": is_analytic(pulled),
        "boundary_tangent": is_boundary_tangent(x),
        "non_analytic_terms": [format_term(t, pulled.n) for t in bad],
    }
    rows = [
        {"component": t.component, "coeff": str(t.coeff), "a": " ".join(map(str, t.a)), "b": str(t.b), "analytic": t.b >= 0 and t.b.denominator == 1}
        for t in pulled
    ]
    return EXIT_PASS, "pass", summary, results, rows


COMMANDS = {
    "check-action": cmd_check_action,
    "smoothness": cmd_smoothness,
    "holder": cmd_holder,
    "geodesic": cmd_geodesic,
    "pullback": cmd_pullback,
    "symbolic": cmd_symbolic,
}


# --- output -----------------------------------------------------------------------


def _plain(obj):
    """JSON-safe copy: numpy scalars and arrays, INFINITY, non-finite floats, Fractions."""
    if obj is INFINITY:
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(obj, Fraction):
        return str(obj)
    return obj


def render_report(config: RunConfig, status: str, results: dict, rows: list[dict]) -> str:
    if config.format == "csv":
        buf = io.StringIO()
        names: list[str] = []
        for row in rows:
            names += [k for k in row if k not in names]
        writer = csv.DictWriter(buf, fieldnames=names, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(_plain(row))
        return buf.getvalue()
    report = {"version": __version__, "config": config.to_dict(), "status": status, "results": results}
    return json.dumps(_plain(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


# --- argument parsing -----------------------------------------------------------------


def _split_tolerances(argv: list[str]) -> tuple[list[str], dict[str, float]]:
    rest, tols = [], {}
    i = 0
    while i < len(argv):
        arg = argv[i]
        if arg.startswith("--tol."):
            name, _, value = arg[len("--tol.") :].partition("=")
            if not value:
                if i + 1 >= len(argv):
                    raise UsageError(f"{arg} needs a value")
                i += 1
                value = argv[i]
            if name not in DEFAULT_TOLERANCES:
                raise UsageError(f"unknown tolerance {name!r}; known: {', '.join(sorted(DEFAULT_TOLERANCES))}")
            try:
                tols[name] = float(value)
            except ValueError:
                raise UsageError(f"tolerance {name} must be a number, got {value!r}") from None
        else:
            rest.append(arg)
        i += 1
    return rest, tols


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="dimension of the hyperbolic space (>= 2)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--f", dest="f_spec", default="p=2", help="reparametrization: p=<int>, f1 or f2")
    common.add_argument("--out", default=None, help="report path ('-' for stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    parser = argparse.ArgumentParser(
        prog="hypcompact",
        description="Compactified SO0(n,1) actions and their diagnostics.",
        epilog="Tolerances: --tol.<name> VALUE with name in " + ", ".join(sorted(DEFAULT_TOLERANCES)),
    )
    parser.add_argument("--version", action="version", version=f"hypcompact {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-action", parents=[common], help="action axioms and boundary fields")
    p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("smoothness", parents=[common], help="classify f/f' and the flatness of f")
    p.add_argument("--k-max", dest="k_max", type=int, default=5)

    p = sub.add_parser("holder", parents=[common], help="Hölder exponent of a boundary conjugacy")
    p.add_argument("--from", dest="source", choices=("proj", "conf"), default="conf")
    p.add_argument("--to", dest="target", choices=("proj", "conf"), default="proj")
    p.add_argument("--pairs", type=int, default=200)

    p = sub.add_parser("geodesic", parents=[common], help="endpoints of random geodesics under phi_f")
    p.add_argument("--random", type=int, default=10, help="number of random geodesics")

    p = sub.add_parser("pullback", parents=[common], help="pulled-back generator fields")
    p.add_argument("--generator", default="H", help="H, X_i, Y_i or R_j_k")
    p.add_argument("--points", type=int, default=20)

    p = sub.add_parser("symbolic", parents=[common], help="exact pullback of a polynomial field by y -> y^p")
    p.add_argument("--field", default=None, help="field expression, e.g. 'y d/dy'")
    p.add_argument("--file", default=None, help="read the field expression from a file")
    p.add_argument("--p", type=int, default=2)
    return parser


_COMMON = {"command", "n", "seed", "f_spec", "out", "format"}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv, tols = _split_tolerances(argv)
        args = build_parser().parse_args(argv)
        config = RunConfig(
            command=args.command,
            n=args.n,
            seed=args.seed,
            f_spec=args.f_spec,
            tolerances={**DEFAULT_TOLERANCES, **tols},
            out=args.out,
            format=args.format,
            options={k: v for k, v in vars(args).items() if k not in _COMMON and v is not None},
        )
        code, status, summary, results, rows = COMMANDS[config.command](config)
    except UsageError as exc:
        print(f"hypcompact: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    report = render_report(config, status, results, rows)
    if config.out == "-":
        print(summary, file=sys.stderr)
        sys.stdout.write(report)
    else:
        print(summary)
        if config.out:
            try:
                with open(config.out, "w", encoding="utf-8") as fh:
                    fh.write(report)
            except OSError as exc:
                print(f"hypcompact: error: cannot write {config.out}: {exc}", file=sys.stderr)
                return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
