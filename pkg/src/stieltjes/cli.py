"""Command-line front end.

    stieltjes eval      --derivator g.json --grid -1:1:5
    stieltjes monomial  --derivator g.json --x0 0 --n 2 --grid 0:1:5
    stieltjes series    --derivator g.json --series s.json --grid 0:0.9:10
    stieltjes exp       --derivator g.json --lambda 1 --x0 0 --grid 0:1:2
    stieltjes solve     --problem p.json --grid 0:2:9
    stieltjes verify    --suite decomposition --derivator random --seed 7

Exit codes: 0 success, 2 invalid input, 3 a verification suite failed.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import derivator as dmod
from .corpus import FIXTURES, random_derivator
from .errors import StieltjesError, ValidationError
from .exponential import ExpG, exp_product, exp_series_detailed
from .monomials import Route, g_monomial, monomial_bounds
from .ode import load_problem, residual, solve
from .series import eval_series_detailed, from_literal
from .suites import SUITES, run_suite

EXIT_OK, EXIT_INVALID, EXIT_SUITE = 0, 2, 3
SEED_ENV = "STIELTJES_SEED"


def fmt(v) -> str:
    """17 significant digits; complex values as a+bj."""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, str):
        return v
    if isinstance(v, complex) or np.iscomplexobj(v):
        v = complex(v)
        return "%.17g%+.17gj" % (v.real + 0.0, v.imag + 0.0)
    return "%.17g" % (float(v) + 0.0)


def parse_grid(text: str) -> list[float]:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise ValidationError(f"grid must look like lo:hi:n, got {text!r}") from None
    if n < 2:
        raise ValidationError("grid needs n >= 2 points")
    if not lo < hi:
        raise ValidationError("grid needs lo < hi")
    return [float(v) for v in np.linspace(lo, hi, n)]


def resolve_seed(seed: Optional[int]) -> int:
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValidationError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0 if seed is None else int(seed)


def load_derivator(source: Optional[str], seed: int):
    """A config path, a named fixture, or ``random``; returns (derivator, label)."""
    if source is None:
        raise ValidationError("--derivator is required")
    if source == "random":
        return random_derivator(np.random.default_rng(seed)), f"random (seed {seed})"
    name = source.replace("_", "-")
    if name in FIXTURES and not os.path.exists(source):
        return FIXTURES[name](), f"fixture {name}"
    try:
        return dmod.load(source), source
    except FileNotFoundError:
        raise ValidationError(f"derivator file not found: {source}") from None


def _load_json_arg(text: str):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"not valid JSON: {exc}") from None


def _scalar(text: str):
    try:
        return float(text)
    except ValueError:
        try:
            return complex(text.replace(" ", ""))
        except ValueError:
            raise ValidationError(f"not a number: {text!r}") from None


def emit(header: Sequence[str], rows: list[list], out, form: str):
    if form == "json":
        json.dump([dict(zip(header, r)) for r in rows], out, indent=1, default=fmt)
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) for v in r])


def _json_safe(v):
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    return v


# ---------------------------------------------------------------- subcommands
def cmd_eval(a, g, label):
    rows = []
    for x in parse_grid(a.grid):
        rows.append([x, g.eval(x), g.continuous(x), g.jump_part(x), g.delta(x), g.classify(x).tag.value])
    return ["x", "g", "g_continuous", "g_jump", "delta", "class"], rows


def cmd_monomial(a, g, label):
    if a.n is None:
        raise ValidationError("--n is required")
    rows = []
    for x in parse_grid(a.grid):
        v = g_monomial(g, a.x0, a.n, x, Route(a.route))
        lo, hi = monomial_bounds(g, a.x0, a.n, x)
        rows.append([x, v, lo, hi])
    return ["x", "value", "lower_bound", "upper_bound"], rows


def cmd_series(a, g, label):
    if a.series is None:
        raise ValidationError("--series is required")
    lit = _load_json_arg(a.series)
    S = from_literal(g, lit)
    rows = []
    for x in parse_grid(a.grid):
        r = eval_series_detailed(S, x, a.tol, heuristic=a.heuristic)
        rows.append([x, r.value, r.tail_bound, r.certified])
    return ["x", "value", "tail_bound", "certified"], rows


def cmd_exp(a, g, label):
    if a.lam is None:
        raise ValidationError("--lambda is required")
    E = ExpG(g, _scalar(a.lam), a.x0)
    rows = []
    for x in parse_grid(a.grid):
        r = exp_series_detailed(E, x, a.tol)
        rows.append([x, r.value, exp_product(E, x), r.certified])
    return ["x", "value", "product", "certified"], rows


def cmd_solve(a, g, label):
    if a.problem is None:
        raise ValidationError("--problem is required")
    p = load_problem(a.problem)
    sol = solve(p, a.tol)
    rows = []
    for x in parse_grid(a.grid):
        r = eval_series_detailed(sol.series, x, a.tol)
        res = residual(p, sol, [x], a.tol)
        rows.append([x, r.value, res, r.certified])
    return ["x", "value", "residual", "certified"], rows


def cmd_verify(a, out) -> int:
    seed = resolve_seed(a.seed)
    names = SUITES if a.suite == "all" else [a.suite]
    if a.suite != "all" and a.suite not in SUITES:
        raise ValidationError(f"unknown suite {a.suite!r}; choose from {', '.join(SUITES)}")
    g, label = (None, "")
    if a.derivator not in (None, "random"):
        g, label = load_derivator(a.derivator, seed)
    failed = False
    reports = []
    for name in names:
        rep = run_suite(name, seed, g, label, a.count)
        reports.append(rep)
        line = rep.line()
        if not rep.passed:
            failed = True
            if label:
                src, how = label, a.derivator
            elif name == "gm-convergence":
                src, how = "fixture geometric", "geometric"
            else:
                src, how = f"random corpus (seed {seed})", "random"
            line += f" [reproduce: --suite {name} --derivator {how} --seed {seed}; source: {src}]"
        print(line, file=out)
    if a.out:
        with open(a.out, "w") as fh:
            json.dump([{"suite": r.suite, "deviation": r.deviation, "tol": r.tol, "checked": r.checked,
                        "passed": r.passed, "worst_at": r.worst_at, "seed": seed} for r in reports],
                      fh, indent=1)
    return EXIT_SUITE if failed else EXIT_OK


COMMANDS = {"eval": cmd_eval, "monomial": cmd_monomial, "series": cmd_series, "exp": cmd_exp,
            "solve": cmd_solve}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--derivator", help="config path, fixture name, or 'random'")
    common.add_argument("--x0", type=float, default=0.0)
    common.add_argument("--grid", default="-1:1:5", help="lo:hi:n")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=None, help=f"overridden by ${SEED_ENV}")

    p = argparse.ArgumentParser(prog="stieltjes", description="Calculus with respect to a derivator g.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="g, its parts and point classes on a grid")
    m = sub.add_parser("monomial", parents=[common], help="g-monomials with their bounds")
    m.add_argument("--n", type=int)
    m.add_argument("--route", choices=[r.value for r in Route], default="auto")
    s = sub.add_parser("series", parents=[common], help="evaluate a series literal")
    s.add_argument("--series", help="series literal (JSON text or path)")
    s.add_argument("--heuristic", action="store_true", help="skip certification")
    e = sub.add_parser("exp", parents=[common], help="the g-exponential")
    e.add_argument("--lambda", dest="lam")
    o = sub.add_parser("solve", parents=[common], help="solve a linear problem file")
    o.add_argument("--problem")
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", default="all", help=f"one of {', '.join(SUITES)} or 'all'")
    v.add_argument("--count", type=int, default=20, help="random derivators per suite")
    return p


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # "--grid -1:1:5" would otherwise be read as an option
    for i in range(len(argv) - 1):
        if argv[i] in ("--grid", "--lambda") and argv[i + 1].startswith("-"):
            argv[i : i + 2] = [f"{argv[i]}={argv[i + 1]}", ""]
    argv = [v for v in argv if v != ""]
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        if a.tol <= 0:
            raise ValidationError("--tol must be positive")
        if a.command == "verify":
            return cmd_verify(a, stdout)
        seed = resolve_seed(a.seed)
        g = label = None
        if a.command != "solve":
            g, label = load_derivator(a.derivator, seed)
        header, rows = COMMANDS[a.command](a, g, label)
        if a.format == "json":
            rows = [[_json_safe(v) for v in r] for r in rows]
        if a.out:
            with open(a.out, "w", newline="") as fh:
                emit(header, rows, fh, a.format)
        else:
            emit(header, rows, stdout, a.format)
        return EXIT_OK
    except ValidationError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_INVALID
    except StieltjesError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
