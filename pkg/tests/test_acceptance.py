"""Acceptance criteria, one test each, every one printing a PASS/FAIL line.

Run on its own with ``pytest tests/test_acceptance.py -s`` or
``python tests/test_acceptance.py``; the lines are also repeated in the
terminal summary.
"""
import dataclasses
import math
import time

import numpy as np
import pytest

from oracles import gf_monomials, ode_value
from stieltjes.corpus import (FIXTURES, geometric_accumulation, mixed, single_left_jump, staircase,
                              step_plus_identity, two_jumps)
from stieltjes.derivator import identity
from stieltjes.errors import NotIdentifiable
from stieltjes.exponential import exp_extended
from stieltjes.monomials import g_monomial, monomial_oracle
from stieltjes.ode import LinearODEProblem, numeric_residual, solve
from stieltjes.series import (OPEN_TAIL, GSeries, coefficients_from_derivatives, eval_series,
                              exp_series_object)
from stieltjes.suites import (corpus_from, exp_ode_residual, gm_errors, suite_bounds,
                              suite_decomposition, suite_exp_product)

SEED = 7
RESULTS: list[str] = []


def report(num: int, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_step_plus_identity_golden():
    t0 = time.perf_counter()
    g = step_plus_identity()
    mono = g_monomial(g, 0.0, 2, 0.5)
    S = GSeries(g, 0.0, (1.0,) * 200, OPEN_TAIL)
    right, left = eval_series(S, 0.5), eval_series(S, -0.5)
    dt = time.perf_counter() - t0
    errs = (abs(mono - 1.25), abs(right - 6.0), abs(left - 2.0 / 3.0))
    ok = errs[0] <= 1e-12 and max(errs[1:]) <= 1e-9 and dt < 1.0
    report(1, ok, f"g_2(0.5)={mono!r}, sum at 0.5={right!r}, at -0.5={left!r}, "
                  f"max err {max(errs):.2e}, {dt:.3f}s")


def test_criterion_02_single_left_jump_closed_form():
    t0 = time.perf_counter()
    g = single_left_jump(1.0)
    exact, worst = True, 0.0
    for n in range(11):
        want = float(math.factorial(n) * (-1.0) ** n)
        for x in (-1.0, -1.25, -2.0, -3.5, -5.0):
            v = g_monomial(g, 0.0, n, x)
            exact &= v == want
            worst = max(worst, abs(gf_monomials(g, 0.0, 10, x)[n] - v) / max(1.0, abs(want)))
            if n <= 6:
                worst = max(worst, abs(monomial_oracle(g, 0.0, n, x) - v) / max(1.0, abs(want)))
    dt = time.perf_counter() - t0
    report(2, exact and worst <= 1e-8 and dt < 5.0,
           f"exact={exact}, oracle deviation {worst:.2e}, {dt:.3f}s")


def test_criterion_03_staircase_vanishes():
    g = staircase()
    bad = [(n, float(x)) for n in range(2, 7) for x in np.linspace(0.0, n - 1, 41)[1:]
           if g_monomial(g, 0.0, n, float(x)) != 0.0]
    report(3, not bad, f"{5 * 40 - len(bad)}/200 points exactly zero" + (f", first bad {bad[0]}" if bad else ""))


def test_criterion_04_decomposition_suite():
    t0 = time.perf_counter()
    rep = suite_decomposition(corpus_from(SEED, 20))
    dt = time.perf_counter() - t0
    report(4, rep.deviation <= 1e-6 and dt < 60.0,
           f"max rel deviation {rep.deviation:.2e} over {rep.checked} checks, {dt:.1f}s")


def test_criterion_05_bounds_suite():
    rep = suite_bounds(corpus_from(SEED, 20))
    report(5, rep.deviation == 0.0, f"worst violation {rep.deviation:.2e} over {rep.checked} checks")


def test_criterion_06_product_and_factorization():
    rep = suite_exp_product(corpus_from(SEED, 20), seed=SEED)
    # the suite weights the C/B factorization deviation by 10, so that part is held to 1e-10
    report(6, rep.deviation <= 1e-9, f"max deviation {rep.deviation:.2e} over {rep.checked} checks")


def test_criterion_07_exponential_ode_residual():
    worst, fewest = 0.0, math.inf
    names = ("identity", "step-plus-identity", "single-left-jump", "staircase", "two-jumps", "mixed")
    for name in names:
        g = FIXTURES[name]()
        for lam in (1.0, -0.5, 2.0):
            dev, n, where = exp_ode_residual(g, lam, 0.0, 100)
            worst, fewest = max(worst, dev), min(fewest, n)
    ok = worst <= 1e-5 and fewest >= 100
    report(7, ok, f"worst residual {worst:.2e}, fewest points {fewest}")


def test_criterion_08_ode_solver():
    # order one against the extended exponential
    g = mixed()
    m1 = 0.0
    for lam in (1.0, -0.5, 0.9):
        sol = solve(LinearODEProblem(g, 0.0, 1, (lam,), (1.0,)))
        for x in np.linspace(0.0, 3.5, 15):
            m1 = max(m1, abs(sol(float(x)) - exp_extended(g, 0.0, lam, float(x))))
    # orders two and three, homogeneous
    hom = 0.0
    for gg in (mixed(), two_jumps(), step_plus_identity()):
        for lams, init in (((-1.0, 0.0), (1.0, 0.0)), ((0.4, -0.3, 0.2), (1.0, -0.5, 0.25))):
            sol = solve(LinearODEProblem(gg, 0.0, len(lams), lams, init))
            hom = max(hom, sol.residual_report)
    # exponential forcing
    f = exp_series_object(g, 0.0, -0.7, 2.0)
    p = LinearODEProblem(g, 0.0, 2, (0.3, -0.4), (1.0, 0.5), f)
    sol = solve(p)
    forced = sol.residual_report
    oracle = max(abs(sol(x) - ode_value(g, 0.0, [0.3, -0.4], [1.0, 0.5], x, mu=-0.7, scale=2.0))
                 for x in (0.5, 1.0, 2.6))
    # perturbed coefficient
    a = list(sol.series.coeffs)
    a[5] += 1e-3
    bad = dataclasses.replace(sol, series=dataclasses.replace(sol.series, coeffs=tuple(a)))
    fault = numeric_residual(p, bad, sol.grid)
    ok = m1 <= 1e-8 and hom <= 1e-5 and forced <= 1e-5 and oracle <= 1e-8 and fault > 1e-4
    report(8, ok, f"m=1 vs extension {m1:.1e}, homogeneous residual {hom:.1e}, "
                  f"forced residual {forced:.1e} (oracle {oracle:.1e}), perturbed residual {fault:.1e}")


def test_criterion_09_truncated_generator_convergence():
    errs = gm_errors(geometric_accumulation())
    ms = sorted(errs)
    monotone = all(errs[b] < errs[a] for a, b in zip(ms, ms[1:]))
    small = errs[16] < 1e-3
    report(9, monotone and small,
           "errors " + ", ".join(f"m={m}: {errs[m]:.4g}" for m in ms)
           + f"; monotone={monotone}, below 1e-3 at m=16: {small}")


def test_criterion_10_coefficient_extraction():
    cases = [
        ("identity", GSeries(identity(), 0.0, (1.0, -2.0, 0.5, 3.0))),
        ("step-plus-identity", exp_series_object(step_plus_identity(), 0.0, 0.7)),
        ("identity exp", exp_series_object(identity(), 0.0, -1.3)),
        ("mixed", exp_series_object(mixed(), 0.5, 0.8)),
    ]
    worst = 0.0
    for _, S in cases:
        got = coefficients_from_derivatives(S, n_max=3)
        worst = max(worst, float(np.max(np.abs(np.asarray(got) - np.asarray(S.coefficients(3))))))
    try:
        coefficients_from_derivatives(GSeries(staircase(), 0.5, (1.0, 1.0, 1.0)))
        raised = False
    except NotIdentifiable:
        raised = True
    report(10, worst <= 1e-5 and raised, f"max coefficient error {worst:.2e}, staircase NotIdentifiable={raised}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
