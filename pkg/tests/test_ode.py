import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import derivators, seeds
from oracles import ode_value
from stieltjes.corpus import mixed, step_plus_identity
from stieltjes.derivator import identity, pure_jumps
from stieltjes.errors import ValidationError
from stieltjes.exponential import exp_extended
from stieltjes.ode import (LinearODEProblem, ODESolution, growth_certificate, load_problem,
                           numeric_residual, recurrence_defect, residual, solve, solve_recurrence)
from stieltjes.series import differentiate_series, eval_series, exp_series_object
from stieltjes.suites import random_problem

COSINE = dict(m=2, lambdas=(-1.0, 0.0), initial=(1.0, 0.0))


def test_recurrence_exponential():
    p = LinearODEProblem(identity(), 0.0, 1, (0.8,), (1.0,))
    a = solve_recurrence(p, 20)
    assert all(a[n] == pytest.approx(0.8**n / math.factorial(n), rel=1e-14) for n in range(21))


def test_recurrence_cosine():
    a = solve_recurrence(LinearODEProblem(mixed(), 0.0, **COSINE), 12)
    for k in range(7):
        assert a[2 * k] == pytest.approx((-1) ** k / math.factorial(2 * k), rel=1e-14)
    assert all(a[2 * k + 1] == 0.0 for k in range(6))


def test_recurrence_zero_problem():
    p = LinearODEProblem(identity(), 0.0, 3, (1.0, 2.0, 3.0), (0.0, 0.0, 0.0))
    assert solve_recurrence(p, 15) == [0.0] * 16
    assert growth_certificate(LinearODEProblem(identity(), 0.0, 1, (0.0,), (0.0,))) == 1.0


def test_recurrence_needs_room():
    with pytest.raises(ValidationError):
        solve_recurrence(LinearODEProblem(identity(), 0.0, **COSINE), 1)


def test_growth_certificate_examples():
    assert growth_certificate(LinearODEProblem(identity(), 0.0, 1, (1.0,), (1.0,))) == 1.0
    assert growth_certificate(LinearODEProblem(identity(), 0.0, **COSINE)) == 2.0


def test_problem_validation():
    with pytest.raises(ValidationError):
        LinearODEProblem(identity(), 0.0, 0, (), ())
    with pytest.raises(ValidationError):
        LinearODEProblem(identity(), 0.0, 2, (1.0,), (1.0, 0.0))
    f = exp_series_object(identity(), 1.0, 0.5)
    with pytest.raises(ValidationError):
        LinearODEProblem(identity(), 0.0, 1, (1.0,), (1.0,), f)


def test_identity_exponential_residual():
    g = identity()
    p = LinearODEProblem(g, 0.0, 1, (1.0,), (1.0,))
    grid = np.linspace(-0.9, 2.0, 30)
    sol = solve(p, grid=grid)
    assert sol.residual_report <= 1e-5
    assert sol(1.0) == pytest.approx(math.e, abs=1e-9)


def test_order_one_matches_exponential_on_jump_fixture():
    g = step_plus_identity()
    sol = solve(LinearODEProblem(g, 0.0, 1, (1.0,), (1.0,)))
    assert sol(0.5) == pytest.approx(2 * math.exp(0.5), abs=1e-8)
    assert sol(0.5) == pytest.approx(exp_extended(g, 0.0, 1.0, 0.5), abs=1e-8)


def test_cosine_on_pure_jumps():
    g = pure_jumps([(0.5, 0.25), (1.0, 0.25)], (-2.0, 2.0))
    sol = solve(LinearODEProblem(g, 0.0, **COSINE))
    # (v, v') -> (v + d v', v' - d v) at each jump
    v, w = 1.0, 0.0
    for d in (0.25, 0.25):
        v, w = v + d * w, w - d * v
    assert v == 0.9375
    assert sol(1.25) == pytest.approx(v, abs=1e-10)
    assert sol(1.25) == pytest.approx(ode_value(g, 0.0, [-1.0, 0.0], [1.0, 0.0], 1.25), abs=1e-10)


def test_nonhomogeneous_exponential_forcing():
    g = step_plus_identity()
    mu, scale = 0.5, 1.0
    f = exp_series_object(g, 0.0, mu, scale)
    p = LinearODEProblem(g, 0.0, 1, (1.0,), (1.0,), f)
    sol = solve(p)
    assert sol.residual_report <= 1e-5
    for x in (0.25, 0.5, 1.0, 2.0):
        want = ode_value(g, 0.0, [1.0], [1.0], x, mu=mu, scale=scale)
        assert sol(x) == pytest.approx(want, rel=1e-8)


def test_nonhomogeneous_second_order():
    g = mixed()
    f = exp_series_object(g, 0.0, -0.7, 2.0)
    p = LinearODEProblem(g, 0.0, 2, (0.3, -0.4), (1.0, 0.5), f)
    sol = solve(p)
    assert sol.residual_report <= 1e-5
    for x in (0.5, 1.0, 2.6):
        want = ode_value(g, 0.0, [0.3, -0.4], [1.0, 0.5], x, mu=-0.7, scale=2.0)
        assert sol(x) == pytest.approx(want, rel=1e-8, abs=1e-10)


def test_exact_exponential_residual():
    g = mixed()
    p = LinearODEProblem(g, 0.0, 1, (0.9,), (1.0,))
    sol = solve(p, check=False)
    assert residual(p, sol, np.linspace(0.0, 4.0, 17)) <= 1e-8


def test_fault_injection():
    g = mixed()
    p = LinearODEProblem(g, 0.0, **COSINE)
    sol = solve(p)
    assert sol.residual_report <= 1e-5
    a = list(sol.series.coeffs)
    a[5] += 1e-3
    bad = dataclasses.replace(sol, series=dataclasses.replace(sol.series, coeffs=tuple(a)))
    assert numeric_residual(p, bad, sol.grid) > 1e-4


def test_problem_file(tmp_path):
    cfg = {"continuous": [{"kind": "identity"}], "jumps": [{"x": 0, "size": 1}], "window": [-5, 5]}
    (tmp_path / "g.json").write_text(json.dumps(cfg))
    prob = {"derivator": "g.json", "x0": 0, "m": 1, "lambdas": [1], "initial": [1],
            "forcing": {"center": 0, "coeffs": [], "tail": {"kind": "exp", "lambda": 0.5, "scale": 1}}}
    (tmp_path / "p.json").write_text(json.dumps(prob))
    p = load_problem(tmp_path / "p.json")
    assert p.m == 1 and not p.homogeneous
    prob["derivator"] = cfg
    (tmp_path / "q.json").write_text(json.dumps(prob))
    assert load_problem(tmp_path / "q.json").g == p.g


# ---- properties
@st.composite
def problems(draw, max_jumps=4):
    g = draw(derivators(max_jumps=max_jumps))
    return random_problem(np.random.default_rng(draw(seeds)), g, 0.0)


@given(problems())
def test_recurrence_exactness(p):
    a = solve_recurrence(p, 40)
    assert recurrence_defect(p, a) <= 1e-14


@given(problems())
def test_initial_conditions(p):
    sol = solve(p, check=False)
    for k in range(p.m):
        assert sol.series.coefficient(k) * math.factorial(k) == pytest.approx(p.initial[k], rel=1e-15, abs=0)
        assert differentiate_series(sol.series, k).coefficient(0) == pytest.approx(p.initial[k], rel=1e-15)


@given(problems(), seeds)
def test_superposition(p, seed):
    extra = tuple(np.random.default_rng(seed).uniform(-1, 1, p.m))
    q = dataclasses.replace(p, initial=extra)
    r = dataclasses.replace(p, initial=tuple(a + b for a, b in zip(p.initial, extra)))
    sa, sb, sc = (np.array(solve_recurrence(x, 30)) for x in (p, q, r))
    M = growth_certificate(r)
    scale = np.array([M ** (n + 1) / math.factorial(n) for n in range(31)])
    assert np.all(np.abs(sa + sb - sc) <= 1e-13 * scale)


@given(problems())
def test_growth_bound(p):
    M = growth_certificate(p)
    a = solve_recurrence(p, 120)
    for n, v in enumerate(a):
        assert math.log(abs(v)) + math.lgamma(n + 1) <= (n + 1) * math.log(M) + 1e-12 if v else True


@given(problems())
def test_matches_system_oracle(p):
    sol = solve(p, check=False)
    g = p.g
    for u in (0.1, 0.5, 0.9):
        x = u * g.window[1]
        if not sol.validity.contains(x):
            continue
        want = ode_value(g, 0.0, p.lambdas, p.initial, x)
        assert abs(sol(x) - want) <= 1e-8 * max(1.0, abs(want))


@given(problems(max_jumps=4))
def test_random_residual(p):
    sol = solve(p)
    assert sol.residual_report <= 1e-5


@given(derivators(max_jumps=4), st.floats(-1.5, 1.5).filter(lambda v: abs(v) > 1e-3), st.floats(0, 1))
def test_order_one_equivalence(g, lam, u):
    p = LinearODEProblem(g, 0.0, 1, (lam,), (1.0,))
    sol = solve(p, check=False)
    x = u * g.window[1]
    assert abs(sol(x) - exp_extended(g, 0.0, lam, x)) <= 1e-8 * max(1.0, abs(exp_extended(g, 0.0, lam, x)))
