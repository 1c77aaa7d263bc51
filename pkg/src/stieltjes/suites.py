"""Verification suites run by ``stieltjes verify``.

Each suite compares two independent computations over a set of derivators
and reports the largest deviation against its tolerance.  Deviations are
relative with an absolute floor: |a - b| / max(1, |b|).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .corpus import geometric_accumulation, random_corpus, random_derivator, two_jumps
from .derivator import Derivator, PointTag
from .errors import DerivativeUndefined, SuiteFailed
from .exponential import ExpG, exp_extended, exp_factors, exp_product, exp_series
from .integral import g_derivative
from .monomials import (change_center, monomial_bounds, monomials_upto, oracle_upto,
                        recursion_first, recursion_second)
from .ode import LinearODEProblem, solve

# (derivator, label) pairs
Corpus = list[tuple[Derivator, str]]


@dataclass
class SuiteReport:
    suite: str
    deviation: float
    tol: float
    checked: int
    worst_at: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.deviation <= self.tol

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        s = (f"{status} {self.suite}: max deviation {self.deviation:.3e} (tol {self.tol:.1e}) "
             f"over {self.checked} checks")
        if not self.passed and self.worst_at:
            s += f"; worst at {self.worst_at}"
        return s


class _Tracker:
    def __init__(self):
        self.worst = 0.0
        self.where = ""
        self.count = 0

    def add(self, dev: float, where: Callable[[], str]):
        self.count += 1
        if not dev <= self.worst:  # also catches nan
            self.worst = dev if dev == dev else math.inf
            self.where = where()


def _rel(a, b) -> float:
    return abs(a - b) / max(1.0, abs(b))


def _grid(g: Derivator, x0: float, per_side: int = 21) -> list[float]:
    lo, hi = g.window
    left = np.linspace(lo, x0, per_side + 1)[:-1]
    right = np.linspace(x0, hi, per_side + 1)[1:]
    return [float(v) for v in (*left, *right)]


def corpus_from(seed: int, count: int = 20, derivator: Optional[Derivator] = None,
                label: str = "") -> Corpus:
    if derivator is not None:
        return [(derivator, label or "derivator")]
    return [(g, f"random derivator #{i} (seed {seed})") for i, g in enumerate(random_corpus(seed, count))]


# ---------------------------------------------------------------- monomial suites
def suite_bounds(corpus: Corpus, x0: float = 0.0, nmax: int = 8) -> SuiteReport:
    t = _Tracker()
    for g, label in corpus:
        for x in _grid(g, x0):
            vals = monomials_upto(g, x0, nmax, x)
            for n in range(nmax + 1):
                lo, hi = monomial_bounds(g, x0, n, x)
                v = vals[n] if x >= x0 else abs(vals[n])
                slack = 1e-12 * max(1.0, abs(hi))
                dev = max(lo - v - slack, v - hi - slack, 0.0) / max(1.0, abs(hi))
                t.add(dev, lambda: f"{label}, n={n}, x={x!r}")
    return SuiteReport("bounds", t.worst, 0.0, t.count, t.where)


def suite_decomposition(corpus: Corpus, x0: float = 0.0, nmax: int = 8) -> SuiteReport:
    t = _Tracker()
    for g, label in corpus:
        for x in _grid(g, x0):
            fast = monomials_upto(g, x0, nmax, x)
            slow = oracle_upto(g, x0, nmax, x)
            for n in range(nmax + 1):
                t.add(_rel(fast[n], slow[n]), lambda: f"{label}, n={n}, x={x!r}")
    return SuiteReport("decomposition", t.worst, 1e-6, t.count, t.where)


def suite_center_change(corpus: Corpus, x0: float = 0.0, nmax: int = 6, seed: int = 0) -> SuiteReport:
    rng = np.random.default_rng(seed)
    t = _Tracker()
    for g, label in corpus:
        lo, hi = g.window
        s = float(rng.uniform(lo, hi))
        for x in _grid(g, x0, 8):
            direct = monomials_upto(g, x0, nmax, x)
            for n in range(nmax + 1):
                t.add(_rel(change_center(g, x0, s, n, x), direct[n]),
                      lambda: f"{label}, s={s!r}, n={n}, x={x!r}")
    return SuiteReport("center-change", t.worst, 1e-8, t.count, t.where)


def suite_hrecursion(corpus: Corpus, x0: float = 0.0, nmax: int = 4) -> SuiteReport:
    t = _Tracker()
    for g, label in corpus:
        for x in _grid(g, x0, 3):
            direct = monomials_upto(g, x0, nmax, x)
            for n in range(2, nmax + 1):
                t.add(_rel(recursion_first(g, x0, n, x), direct[n]),
                      lambda: f"{label}, first recursion, n={n}, x={x!r}")
                t.add(_rel(recursion_second(g, x0, n, x), direct[n]),
                      lambda: f"{label}, second recursion, n={n}, x={x!r}")
    return SuiteReport("hrecursion", t.worst, 1e-8, t.count, t.where)


def gm_errors(g: Derivator, x0: float = 0.0, ms=(2, 4, 8, 16), nmax: int = 4,
              points: int = 81) -> dict[int, float]:
    """sup over a grid of |g^m_n - g_n| (n <= nmax) for each m."""
    lo, hi = g.window
    xs = np.linspace(lo, hi, points)
    exact = {float(x): monomials_upto(g, x0, nmax, float(x)) for x in xs}
    out = {}
    for m in ms:
        gm = g.truncate_jumps(m).derivator
        out[m] = max(float(np.max(np.abs(monomials_upto(gm, x0, nmax, float(x)) - exact[float(x)])))
                     for x in xs)
    return out


def suite_gm_convergence(g: Optional[Derivator] = None, x0: float = 0.0,
                         target: float = 1e-3) -> SuiteReport:
    g = g or geometric_accumulation()
    errs = gm_errors(g, x0)
    ms = sorted(errs)
    increase = max([errs[b] - errs[a] for a, b in zip(ms, ms[1:])] + [0.0])
    # deviation: how far the last error sits above the target, or any increase
    dev = max(increase, errs[ms[-1]] - target, 0.0)
    rep = SuiteReport("gm-convergence", dev, 0.0, len(ms),
                      "geometric fixture, errors " + ", ".join(f"m={m}: {errs[m]:.4g}" for m in ms))
    rep.extra = {"errors": errs, "monotone": increase <= 0.0}
    return rep


# ---------------------------------------------------------------- exponential suites
def suite_exp_product(corpus: Corpus, seed: int = 0, per: int = 3, x0: float = 0.0) -> SuiteReport:
    rng = np.random.default_rng(seed)
    t = _Tracker()
    fixture = two_jumps()
    E = ExpG(fixture, 1.0, 0.0)
    t.add(abs(2.25 - exp_series(E, 2.5)) / 3.25, lambda: "two-jump fixture at x=2.5")
    for g, label in corpus:
        for lam in rng.uniform(-4.0, 4.0, per):
            lam = float(lam) or 1.0
            E = ExpG(g, lam, x0)
            for x in np.linspace(x0, g.window[1], 11):
                x = float(x)
                s = exp_series(E, x)
                p = exp_product(E, x)
                fc, fb = exp_factors(E, x)
                t.add(abs(s - p) / (1.0 + abs(p)), lambda: f"{label}, lambda={lam!r}, x={x!r} (product)")
                # factorization check is ten times stricter: scale it into the same tolerance
                t.add(10.0 * abs(s - fc * fb) / (1.0 + abs(s)),
                      lambda: f"{label}, lambda={lam!r}, x={x!r} (C/B factorization)")
    return SuiteReport("exp-product", t.worst, 1e-9, t.count, t.where)


def _derivative_defined(g: Derivator, x: float) -> bool:
    c = g.classify(x)
    if c.tag is PointTag.CONSTANT_INTERIOR:
        return math.isfinite(c.component_end) and c.component_end < g.window[1]
    return x < g.window[1] or g.delta(x) == 0


def exp_ode_points(g: Derivator, count: int = 100) -> list[float]:
    """At least ``count`` evenly spaced points where the g-derivative is defined,
    plus every jump and structural point in the window."""
    lo, hi = g.window
    n = count
    while True:
        even = [x for x in np.linspace(lo, hi, n + 1)[:-1].tolist() if _derivative_defined(g, x)]
        if len(even) >= count or n > 64 * count:
            break
        n *= 2
    pts = set(even)
    pts.update(float(x) for x in g.jumps_in(lo, hi, mass_tol=1e-4).locations)
    pts.update(g.structural_points(lo, hi))
    return sorted(pts)


def exp_ode_residual(g: Derivator, lam, x0: float, count: int = 100):
    """max |Exp'_g - lam Exp_g| / max(1, |lam Exp_g|) and the number of points checked."""
    worst, where, n = 0.0, "", 0

    def f(y):
        return exp_extended(g, x0, lam, y)

    for x in exp_ode_points(g, count):
        try:
            d = g_derivative(g, f, x)
        except DerivativeUndefined:
            continue
        rhs = lam * f(x)
        dev = abs(d - rhs) / max(1.0, abs(rhs))
        n += 1
        if not dev <= worst:
            worst, where = dev, f"x={x!r} ({g.classify(x).tag.value})"
    return worst, n, where


def suite_exp_ode(corpus: Corpus, lambdas=(1.0, -0.5, 2.0), x0: float = 0.0) -> SuiteReport:
    t = _Tracker()
    for g, label in corpus:
        for lam in lambdas:
            try:
                ExpG(g, lam, x0)
                dev, n, where = exp_ode_residual(g, lam, x0)
            except Exception as exc:  # a vanishing factor left of x0 has no extension
                if type(exc).__name__ == "HypothesisViolated":
                    continue
                raise
            t.count += n - 1
            t.add(dev, lambda: f"{label}, lambda={lam!r}, {where}")
    return SuiteReport("exp-ode", t.worst, 1e-5, t.count, t.where)


# ---------------------------------------------------------------- ode suite
def random_problem(rng: np.random.Generator, g: Derivator, x0: float = 0.0) -> LinearODEProblem:
    m = int(rng.integers(1, 4))
    lams = tuple(float(v) for v in rng.uniform(-1.5, 1.5, m))
    init = tuple(float(v) for v in rng.uniform(-1.0, 1.0, m))
    return LinearODEProblem(g, x0, m, lams, init)


def suite_ode_residual(seed: int, count: int = 10, derivator: Optional[Derivator] = None,
                       label: str = "") -> SuiteReport:
    rng = np.random.default_rng(seed)
    t = _Tracker()
    for i in range(count):
        if derivator is None:
            g = random_derivator(rng, max_jumps=4)
            lab = f"random ODE #{i} (seed {seed})"
        else:
            g, lab = derivator, label or "derivator"
        p = random_problem(rng, g, 0.0)
        sol = solve(p)
        t.add(sol.residual_report, lambda: f"{lab}, m={p.m}, lambdas={p.lambdas}, initial={p.initial}")
    return SuiteReport("ode-residual", t.worst, 1e-5, t.count, t.where)


SUITES = ("bounds", "decomposition", "center-change", "hrecursion", "exp-product", "exp-ode",
          "ode-residual", "gm-convergence")


def run_suite(name: str, seed: int = 7, derivator: Optional[Derivator] = None, label: str = "",
              count: int = 20) -> SuiteReport:
    corpus = corpus_from(seed, count, derivator, label)
    if name == "bounds":
        return suite_bounds(corpus)
    if name == "decomposition":
        return suite_decomposition(corpus)
    if name == "center-change":
        return suite_center_change(corpus, seed=seed)
    if name == "hrecursion":
        return suite_hrecursion(corpus[: max(1, count // 4)])
    if name == "exp-product":
        return suite_exp_product(corpus, seed=seed)
    if name == "exp-ode":
        return suite_exp_ode(corpus)
    if name == "ode-residual":
        return suite_ode_residual(seed, max(1, count // 2), derivator, label)
    if name == "gm-convergence":
        return suite_gm_convergence(derivator)
    raise SuiteFailed(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")


def verify_suites(names=SUITES, seed: int = 7, derivator: Optional[Derivator] = None,
                  label: str = "", count: int = 20, strict: bool = False) -> list[SuiteReport]:
    """Run several suites.  With ``strict`` the first failure raises SuiteFailed
    carrying the seed and derivator source needed to reproduce it."""
    out = []
    for name in names:
        rep = run_suite(name, seed, derivator, label, count)
        out.append(rep)
        if strict and not rep.passed:
            src = label or ("fixture geometric" if name == "gm-convergence" and derivator is None
                            else f"random corpus (seed {seed})")
            raise SuiteFailed(f"{rep.line()}; seed {seed}; source: {src}")
    return out
