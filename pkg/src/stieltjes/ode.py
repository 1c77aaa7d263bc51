"""Linear Stieltjes differential equations with constant coefficients.

    v^{(m)}_g = lam_0 v + lam_1 v'_g + ... + lam_{m-1} v^{(m-1)}_g (+ f),
    v^{(k)}_g(x0) = c_k,

solved by the series v = sum a_n g_{x0,n} whose coefficients obey

    a_{n+m} (n+m)! = sum_k lam_k a_{n+k} (n+k)! + r_n n!

with f = sum r_n g_{x0,n} the forcing series.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .derivator import INF, Derivator, PointTag
from .errors import (BoundViolated, DerivativeUndefined, NotCertified, OutsideDomain,
                     ValidationError)
from .exponential import omega_domain
from .integral import g_derivative
from .series import (MAX_TERMS, OPEN_TAIL, ConvergenceDomain, GSeries, TailKind,
                     _geometric_tail, _poisson_tail, differentiate_series, eval_series,
                     left_growth_bound)

# points per unit of g-length in the default residual grid
GRID_DENSITY = 33
MAX_GRID = 2000


@dataclass(frozen=True)
class LinearODEProblem:
    g: Derivator
    x0: float
    m: int
    lambdas: tuple
    initial: tuple
    forcing: Optional[GSeries] = None

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 1:
            raise ValidationError("order m must be an integer >= 1")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "x0", float(self.x0))
        object.__setattr__(self, "lambdas", tuple(self.lambdas))
        object.__setattr__(self, "initial", tuple(self.initial))
        if len(self.lambdas) != self.m or len(self.initial) != self.m:
            raise ValidationError(f"need exactly m = {self.m} coefficients and initial values")
        self.g._check(self.x0)
        if self.forcing is not None and self.forcing.center != self.x0:
            raise ValidationError("the forcing series must share the centre x0")

    @property
    def homogeneous(self) -> bool:
        return self.forcing is None


@dataclass(frozen=True)
class ODESolution:
    series: GSeries
    growth_M: float
    validity: ConvergenceDomain
    residual_report: Optional[float] = None
    grid: tuple = field(default=(), repr=False)

    def __call__(self, x: float, abs_tol: float = 1e-10):
        if not self.validity.contains(float(x)):
            raise OutsideDomain(f"x = {x!r} lies outside the validity domain {self.validity}")
        return eval_series(self.series, x, abs_tol)

    def derivative(self, k: int, x: float, abs_tol: float = 1e-10):
        return eval_series(differentiate_series(self.series, k), x, abs_tol)


def _forcing_coeff(p: LinearODEProblem, n: int):
    return 0.0 if p.forcing is None else p.forcing.coefficient(n)


def _forcing_limit(p: LinearODEProblem) -> int:
    """Largest n for which r_n is known."""
    f = p.forcing
    if f is None or f.tail.kind is not TailKind.OPEN:
        return INF
    return f.prefix_length - 1


def solve_recurrence(p: LinearODEProblem, N: int) -> list:
    """a_0..a_N from the initial data and the coefficient recurrence.

    Works with the ratios (n+k)!/(n+m)! directly, so nothing overflows.
    """
    m = p.m
    if N < m:
        raise ValidationError(f"need N >= m = {m}")
    a = [c / math.factorial(k) for k, c in enumerate(p.initial)]
    for n in range(N - m + 1):
        # q[k] = (n+k)! / (n+m)!
        q = [1.0] * (m + 1)
        for k in range(m - 1, -1, -1):
            q[k] = q[k + 1] / (n + k + 1)
        tot = sum(lam * a[n + k] * q[k] for k, lam in enumerate(p.lambdas))
        r = _forcing_coeff(p, n)
        if r != 0:
            # n! / (n+m)! = q[0]
            tot = tot + r * q[0]
        a.append(tot)
    return a[: N + 1]


def recurrence_defect(p: LinearODEProblem, a: Sequence) -> float:
    """max relative defect of a_{n+m}(n+m)! = sum lam_k a_{n+k}(n+k)! + r_n n!."""
    worst = 0.0
    m = p.m
    for n in range(len(a) - m):
        lhs = a[n + m] * math.prod(range(n + 1, n + m + 1))
        terms = [lam * a[n + k] * math.prod(range(n + 1, n + k + 1)) for k, lam in enumerate(p.lambdas)]
        terms.append(_forcing_coeff(p, n))
        # both sides divided by n!
        rhs = sum(terms)
        scale = abs(lhs) + sum(abs(t) for t in terms)
        if scale > 0:
            worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def _homogeneous_M(p: LinearODEProblem) -> float:
    C = max([1.0, *(abs(c) for c in p.initial), *(abs(v) for v in p.lambdas)])
    return p.m * C


def _forcing_cert(p: LinearODEProblem) -> tuple[float, float]:
    """(K, A) with |r_n| n! <= A K^(n+1)."""
    f = p.forcing
    if f.growth_cert is not None:
        return f.growth_cert, f.cert_amplitude
    # no certificate: try the bound implied by convergence at a left jump
    lo = p.g.window[0]
    c = p.g.next_jump_left(p.x0)
    if c >= lo and p.g.delta(c) > 0:
        return left_growth_bound(f, c), 1.0
    raise NotCertified("the forcing series needs a growth certificate")


def growth_certificate(p: LinearODEProblem, N: int = 60) -> float:
    """M with |a_n| n! <= M^(n+1) for the solution coefficients.

    Homogeneous: M = m * max{1, |c_k|, |lam_k|}.  With forcing, the
    convolution bound |b_{n+m}| <= sum_k M^k R_{n-k} (M = C^2,
    C = max{1, sum|lam_k|, sum|b_k|}) is checked on the prefix and folded
    into a single rate 2 max{M, K, 1}, K being the forcing's rate.
    Both are validated on the first N coefficients.
    """
    a = solve_recurrence(p, max(N, p.m))
    b = [abs(v) * math.factorial(n) if n <= 170 else abs(v) * math.exp(math.lgamma(n + 1))
         for n, v in enumerate(a)]
    if p.homogeneous:
        M = _homogeneous_M(p)
        _validate(b, M, 1.0)
        return M
    C = max(1.0, sum(abs(v) for v in p.lambdas), sum(b[: p.m]))
    Mc = C * C
    R = [abs(_forcing_coeff(p, n)) * math.factorial(n) for n in range(len(b) - p.m)]
    R[0] += Mc
    B = 0.0
    for n in range(len(b) - p.m):
        B = Mc * B + R[n]
        if b[n + p.m] > B * (1 + 1e-12):
            raise BoundViolated(f"|b_{n + p.m}| = {b[n + p.m]!r} exceeds the convolution bound {B!r}")
    K, A = _forcing_cert(p)
    M = 2.0 * max(Mc, K * max(A, 1.0), 1.0)
    _validate(b, M, 1.0)
    return M


def _validate(b, M, A):
    logM, logA = math.log(M), math.log(A)
    for n, v in enumerate(b):
        if v > 0 and math.log(v) > logA + (n + 1) * logM + 1e-12 * (n + 1):
            raise BoundViolated(f"|a_{n}| n! = {v!r} exceeds M^(n+1) with M = {M!r}")


def _prefix_length(p: LinearODEProblem, M: float, abs_tol: float, grid=()) -> int:
    g = p.g
    lo, hi = g.window
    z_right = M * max(g.value(hi) - g.value(p.x0), 0.0)
    N = p.m
    while M * _poisson_tail(z_right, N) > abs_tol:
        N += 1
        if N > MAX_TERMS:
            raise NotCertified(f"more than {MAX_TERMS} terms needed for tolerance {abs_tol:g}")
    # also cover the left side out to M|g_1| = 1/2 when the window reaches that far
    q = min(0.5, M * abs(g.value(p.x0) - g.value(lo)))
    # and out to the leftmost requested point, when it is certifiable at all
    # (with room for the difference quotients taken around each point)
    probe = 2e-3 * g.span
    reach = [M * abs(g.value(max(lo, x - probe)) - g.value(p.x0)) for x in grid if x < p.x0]
    if reach and q < max(reach) < 1.0:
        q = max(reach)
    while M * _geometric_tail(q, N) > abs_tol:
        N += 1
    # the k-th derivative series loses its first k terms
    N += p.m
    limit = _forcing_limit(p)
    if limit != INF:
        N = min(N, limit + p.m)
    return N


def _validity(p: LinearODEProblem, M: float) -> ConvergenceDomain:
    dom = omega_domain(p.g, p.x0, M)
    if p.homogeneous:
        return ConvergenceDomain(dom.kind, dom.t, certified=True)
    return dom


def solve(p: LinearODEProblem, abs_tol: float = 1e-10, grid: Optional[Sequence[float]] = None,
          check: bool = True) -> ODESolution:
    """Series solution with growth certificate, validity domain and residual report."""
    if abs_tol <= 0:
        raise ValidationError("abs_tol must be positive")
    M = growth_certificate(p)
    # size the prefix so that v, v', ..., v^(m) all certify at abs_tol
    grid = () if grid is None else tuple(float(x) for x in grid)
    N = _prefix_length(p, M, abs_tol / (10.0 * M ** p.m), grid)
    a = solve_recurrence(p, N)
    S = GSeries(p.g, p.x0, tuple(a), OPEN_TAIL, M)
    validity = _validity(p, M)
    sol = ODESolution(S, M, validity)
    if not check:
        return sol
    pts = tuple(grid) if grid else tuple(default_grid(p, sol))
    rep = numeric_residual(p, sol, pts, abs_tol)
    return ODESolution(S, M, validity, rep, pts)


def default_grid(p: LinearODEProblem, sol: ODESolution) -> list[float]:
    """33 points per unit of g-length on [x0, window end), plus the jump
    points there, minus constancy-interval interiors."""
    g = p.g
    hi = g.window[1]
    glen = g.value(hi) - g.value(p.x0)
    n = int(min(MAX_GRID, max(2, math.ceil(GRID_DENSITY * glen))))
    xs = set(np.linspace(p.x0, hi, n + 1)[:-1].tolist())
    js = g.jumps_in(p.x0, hi, mass_tol=1e-6)
    xs.update(float(x) for x in js.locations)
    xs.update(g.structural_points(p.x0, hi))
    out = []
    for x in sorted(xs):
        tag = g.classify(x).tag
        if tag is PointTag.CONSTANT_INTERIOR:
            continue
        if sol.validity.contains(x):
            out.append(x)
    return out


def _rhs(p: LinearODEProblem, derivs: Sequence, x: float, abs_tol: float):
    tot = sum(lam * d for lam, d in zip(p.lambdas, derivs))
    if p.forcing is not None:
        tot = tot + eval_series(p.forcing, x, abs_tol)
    return tot


def residual(p: LinearODEProblem, sol: ODESolution, grid: Sequence[float],
             abs_tol: float = 1e-10) -> float:
    """max |v^(m) - sum lam_k v^(k) - f| over the grid, all from term-wise derivatives."""
    ders = [differentiate_series(sol.series, k) for k in range(p.m + 1)]
    worst = 0.0
    for x in grid:
        vals = [eval_series(d, x, abs_tol) for d in ders]
        worst = max(worst, abs(vals[p.m] - _rhs(p, vals[: p.m], x, abs_tol)))
    return worst


def numeric_residual(p: LinearODEProblem, sol: ODESolution, grid: Sequence[float],
                     abs_tol: float = 1e-10) -> float:
    """Residual with the top derivative taken numerically.

    v^(m) is the numerical g-derivative of the evaluated series for
    v^(m-1); lower derivatives come from the term-wise series.
    """
    ders = [differentiate_series(sol.series, k) for k in range(p.m)]
    top = ders[-1]
    worst = 0.0
    for x in grid:
        vals = [eval_series(d, x, abs_tol) for d in ders]
        dm = g_derivative(p.g, lambda y: eval_series(top, y, abs_tol), x)
        worst = max(worst, abs(dm - _rhs(p, vals, x, abs_tol)))
    return worst


# ---------------------------------------------------------------- problem files
def problem_from_dict(d: dict, base_dir=None) -> LinearODEProblem:
    from . import derivator as dmod
    from .series import from_literal
    src = d.get("derivator")
    if isinstance(src, str):
        import os
        path = src if base_dir is None or os.path.isabs(src) else os.path.join(base_dir, src)
        g = dmod.load(path)
    elif isinstance(src, dict):
        g = dmod.from_config(src)
    else:
        raise ValidationError("problem needs a 'derivator' config or path")
    try:
        x0 = float(d.get("x0", 0.0))
        m = int(d["m"])
        lambdas = tuple(_num(v) for v in d["lambdas"])
        initial = tuple(_num(v) for v in d["initial"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed problem: {exc}") from None
    forcing = d.get("forcing")
    f = from_literal(g, forcing) if forcing else None
    return LinearODEProblem(g, x0, m, lambdas, initial, f)


def _num(v):
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    return float(v)


def load_problem(path) -> LinearODEProblem:
    import os
    with open(path) as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: not valid JSON ({exc})") from None
    return problem_from_dict(d, os.path.dirname(os.path.abspath(path)))
