import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import derivators
from oracles import gf_monomials
from stieltjes.corpus import (geometric_accumulation, mixed, single_left_jump, staircase,
                              step_plus_identity, two_jumps)
from stieltjes.derivator import PointTag, identity
from stieltjes.errors import RouteUnavailable, ValidationError
from stieltjes.integral import g_derivative
from stieltjes.monomials import (HFunctionRequest, MonomialRequest, Route, change_center,
                                 g_monomial, h_function, h_value, jump_monomial_left,
                                 jump_monomial_right, monomial, monomial_bounds, monomial_oracle,
                                 monomials_upto, oracle_upto, recursion_first, recursion_second)


# ---- worked examples
def test_identity_power():
    assert g_monomial(identity(), 0.0, 3, 2.0) == 8.0


def test_unit_step_plus_identity():
    assert g_monomial(step_plus_identity(), 0.0, 2, 0.5) == pytest.approx(1.25, abs=1e-15)
    for n in range(1, 7):
        x = 0.3
        assert g_monomial(step_plus_identity(), 0.0, n, x) == pytest.approx(x**n + n * x ** (n - 1), rel=1e-13)


@pytest.mark.parametrize("n", range(0, 11))
def test_single_left_jump_closed_form(n):
    g = single_left_jump(1.0)
    for x in (-1.0, -1.5, -3.0):
        assert g_monomial(g, 0.0, n, x) == math.factorial(n) * (-1.0) ** n
    assert monomial_oracle(g, 0.0, n, -2.0) == pytest.approx(math.factorial(n) * (-1.0) ** n, rel=1e-8)


@pytest.mark.parametrize("n", range(2, 7))
def test_staircase_vanishes(n):
    g = staircase()
    for x in np.linspace(0.0, n - 1, 13)[1:]:
        assert g_monomial(g, 0.0, n, float(x)) == 0.0


def test_staircase_degree_four():
    assert g_monomial(staircase(), 0.0, 4, 2.5) == 0.0


def test_jump_monomial_right():
    assert jump_monomial_right([1.0, 2.0, 3.0], 2) == 22.0
    assert jump_monomial_right([], 1) == 0.0
    assert jump_monomial_right([0.5, 0.5], 3) == 0.0


def test_jump_monomial_left():
    assert jump_monomial_left([1.0], 3) == -6.0
    assert jump_monomial_left([1.0, 2.0], 2) == 14.0
    assert jump_monomial_left([0.3, 0.7, 2.0], 0) == 1.0


@given(st.lists(st.floats(0.01, 3.0), max_size=5), st.integers(0, 5))
def test_symmetric_polynomials_brute_force(sizes, n):
    e = sum(math.prod(c) for c in itertools.combinations(sizes, n))
    h = sum(math.prod(c) for c in itertools.combinations_with_replacement(sizes, n))
    f = math.factorial(n)
    assert jump_monomial_right(sizes, n) == pytest.approx(f * e, rel=1e-12, abs=1e-300)
    assert jump_monomial_left(sizes, n) == pytest.approx((-1) ** n * f * h, rel=1e-12, abs=1e-300)


def test_change_center_examples():
    assert change_center(identity(), 0.0, 1.0, 2, 3.0) == pytest.approx(9.0, abs=1e-14)
    g = step_plus_identity()
    assert change_center(g, 0.0, 0.5, 2, 0.75) == pytest.approx(2.0625, abs=1e-14)
    assert change_center(mixed(), 0.3, 0.3, 4, 2.2) == g_monomial(mixed(), 0.3, 4, 2.2)


def test_oracle_examples():
    assert monomial_oracle(identity(), 0.0, 2, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert monomial_oracle(step_plus_identity(), 0.0, 2, 0.5) == pytest.approx(1.25, abs=1e-8)
    assert monomial_oracle(single_left_jump(), 0.0, 2, -2.0) == pytest.approx(2.0, abs=1e-12)


def test_bounds_examples():
    for x in (0.0, 0.7, 2.0):
        lo, hi = monomial_bounds(identity(), 0.0, 3, x)
        assert lo == pytest.approx(x**3) and hi == pytest.approx(x**3)
    lo, hi = monomial_bounds(single_left_jump(), 0.0, 2, -1.5)
    assert hi == 2.0 and g_monomial(single_left_jump(), 0.0, 2, -1.5) == hi
    assert monomial_bounds(mixed(), 0.0, 0, 1.3) == (1.0, 1.0)


def test_h_function_examples():
    g = step_plus_identity()
    assert h_value(g, 0.0, 1, 0, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert h_value(identity(), 0.0, 2, 1, 1.5) == 0.0
    assert recursion_first(g, 0.0, 3, 0.5) == pytest.approx(g_monomial(g, 0.0, 3, 0.5), abs=1e-10)


def test_requests_validate():
    with pytest.raises(ValidationError):
        MonomialRequest(identity(), 0.0, -1)
    with pytest.raises(ValidationError):
        HFunctionRequest(identity(), 0.0, 0, 1, 1.0)


def test_forced_routes():
    with pytest.raises(RouteUnavailable):
        g_monomial(step_plus_identity(), 0.0, 2, 0.5, Route.JUMP)
    with pytest.raises(RouteUnavailable):
        g_monomial(step_plus_identity(), 0.0, 2, 0.5, Route.CONTINUOUS)
    g = two_jumps()
    for route in (Route.AUTO, Route.JUMP, Route.DECOMPOSITION, Route.ORACLE):
        assert g_monomial(g, 0.0, 2, 2.5, route) == pytest.approx(0.5, abs=1e-12)


# ---- frozen reference values (generating-function oracle in tests/oracles.py)
FROZEN = [
    (mixed, 2.7, [1.0, 2.1, 3.8275, 6.1825, 9.06493125]),
    (mixed, -2.5, [1.0, -1.8, 3.33, -6.372, 12.7089]),
    (geometric_accumulation, -0.3, [1.0, -0.5, 1 / 3, -2 / 7, 32 / 105]),
    (geometric_accumulation, 0.5, [1.0, 0.5, 0.25, 0.125, 0.0625]),
]


@pytest.mark.parametrize("make,x,want", FROZEN)
def test_frozen_values(make, x, want):
    g = make()
    got = monomials_upto(g, 0.0, 4, x)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-14)
    assert np.allclose(gf_monomials(g, 0.0, 4, x), want, rtol=1e-12, atol=1e-14)


# ---- properties over random derivators
@given(derivators(), st.floats(0, 1), st.sampled_from([-0.5, 0.0, 1.0]))
def test_matches_generating_function(g, u, x0):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    got = monomials_upto(g, x0, 8, x)
    ref = gf_monomials(g, x0, 8, x)
    assert np.all(np.abs(got - ref) <= 1e-9 * (1 + np.abs(ref)))


@given(derivators(), st.floats(0, 1))
def test_decomposition_matches_integral_oracle(g, u):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    got = monomials_upto(g, 0.0, 8, x)
    ref = oracle_upto(g, 0.0, 8, x)
    assert np.all(np.abs(got - ref) <= 1e-6 * (1 + np.abs(ref)))


@given(derivators(), st.floats(0, 1))
def test_sign_pattern(g, u):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    vals = monomials_upto(g, 0.0, 8, x)
    if x >= 0:
        assert np.all(vals >= 0)
    else:
        signs = np.array([(-1) ** n for n in range(9)])
        assert np.all(vals * signs >= 0)


@given(derivators(), st.floats(0, 1), st.integers(0, 8))
def test_bounds_hold(g, u, n):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    v = g_monomial(g, 0.0, n, x)
    b_lo, b_hi = monomial_bounds(g, 0.0, n, x)
    slack = 1e-12 * max(1.0, abs(b_hi))
    a = v if x >= 0 else abs(v)
    assert b_lo - slack <= a <= b_hi + slack


@given(derivators(), st.floats(0, 1), st.floats(0, 1), st.floats(0, 1), st.integers(0, 6))
def test_center_change(g, u, v, w, n):
    lo, hi = g.window
    r, s, x = (lo + t * (hi - lo) for t in (u, v, w))
    want = g_monomial(g, r, n, x)
    assert abs(change_center(g, r, s, n, x) - want) <= 1e-8 * max(1.0, abs(want))


@given(derivators(max_jumps=4), st.floats(0, 1), st.integers(2, 5))
def test_h_recursions(g, u, n):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    want = g_monomial(g, 0.0, n, x)
    assert abs(recursion_first(g, 0.0, n, x) - want) <= 1e-6 * max(1.0, abs(want))
    assert abs(recursion_second(g, 0.0, n, x) - want) <= 1e-6 * max(1.0, abs(want))


@given(derivators(max_jumps=4), st.floats(0.02, 0.98), st.integers(1, 4))
def test_derivative_law(g, u, n):
    lo, hi = g.window
    x = lo + u * (hi - lo)
    if g.classify(x).tag is PointTag.CONSTANT_INTERIOR:
        return
    d = g_derivative(g, lambda y: g_monomial(g, 0.0, n, y), x)
    want = n * g_monomial(g, 0.0, n - 1, x)
    assert abs(d - want) <= 1e-5 * max(1.0, abs(want))


def test_continuous_closed_form_is_power():
    g = mixed().split()[0]
    for x in (-3.0, -0.5, 0.5, 4.0):
        g1 = g.eval(x) - g.eval(0.0)
        assert monomial(MonomialRequest(g, 0.0, 5), x) == pytest.approx(g1**5, rel=1e-14, abs=1e-14)
        assert monomial(MonomialRequest(g, 0.0, 5, Route.ORACLE), x) == pytest.approx(g1**5, rel=1e-8, abs=1e-10)


def test_truncation_converges_on_jump_fixture():
    g = two_jumps()
    xs = np.linspace(*g.window, 41)
    errs = []
    for m in (1, 2, 4):
        gm = g.truncate_jumps(m).derivator
        errs.append(max(np.max(np.abs(monomials_upto(gm, 0.0, 4, x) - monomials_upto(g, 0.0, 4, x))) for x in xs))
    assert errs[0] >= errs[1] >= errs[2] == 0.0


def test_h_function_request_direct():
    req = HFunctionRequest(step_plus_identity(), 0.0, 1, 0, 1.0)
    assert h_function(req) == pytest.approx(1.0)
