"""Lebesgue-Stieltjes integration against mu_g and the numerical g-derivative.

The measure splits into atoms at the jumps of g and an absolutely continuous
part with piecewise constant density (the slopes of g^C).  Integrals are
therefore an exact jump sum plus adaptive Gauss-Legendre quadrature on each
piece where g^C is affine.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Union

import numpy as np
from numpy.polynomial import legendre as L

from .derivator import Derivator, PointTag
from .errors import DerivativeUndefined, LimitNotConverged, ToleranceNotMet, ValidationError

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Quadrature:
    abs_tol: float = 1e-10
    max_refinements: int = 40
    oriented: bool = True  # a > b gives minus the integral over [b, a)
    points: int = 10

    def __post_init__(self):
        if not self.abs_tol > 0:
            raise ValidationError("abs_tol must be positive")
        if self.max_refinements < 0:
            raise ValidationError("max_refinements must be non-negative")


@dataclass(frozen=True)
class Integrand:
    f: Callable
    regularity: str = "g-continuous"
    bound: Optional[float] = None
    vectorized: bool = False


DEFAULT_QUADRATURE = Quadrature()


@lru_cache(maxsize=64)
def _gauss(p: int):
    x, w = L.leggauss(p)
    return x, w


@lru_cache(maxsize=64)
def _cumulative(p: int):
    """Nodes, weights and S with S[i, j] = integral of the j-th Lagrange basis over [-1, x_i]."""
    x, w = _gauss(p)
    V = L.legvander(x, p - 1)
    C = np.linalg.inv(V)
    A = np.empty((p, p))
    for k in range(p):
        e = np.zeros(p)
        e[k] = 1.0
        A[:, k] = L.legval(x, L.legint(e, lbnd=-1))
    return x, w, A @ C


def _unpack(f) -> tuple[Callable, Optional[float], bool]:
    if isinstance(f, Integrand):
        return f.f, f.bound, f.vectorized
    return f, None, False


def _values(fn, nodes, vectorized):
    if vectorized:
        return np.asarray(fn(nodes))
    return np.array([fn(float(s)) for s in nodes])


def measure_interval(g: Derivator, a: float, b: float) -> float:
    """mu_g([a, b)) = g(b) - g(a)."""
    if a > b:
        raise ValidationError("measure_interval requires a <= b")
    return g.eval(b) - g.eval(a)


def _adaptive(fn, lo, hi, tol, q: Quadrature, vectorized, budget):
    x, w = _gauss(q.points)

    def gl(a, b):
        h = 0.5 * (b - a)
        return h * np.dot(w, _values(fn, h * x + 0.5 * (a + b), vectorized))

    total = 0.0
    stack = [(lo, hi, gl(lo, hi), tol, 0)]
    while stack:
        a, b, whole, t, depth = stack.pop()
        m = 0.5 * (a + b)
        left, right = gl(a, m), gl(m, b)
        est = left + right
        floor = 64 * EPS * (abs(left) + abs(right))
        if abs(est - whole) <= max(t, floor):
            total = total + est
            continue
        budget[0] -= 1
        if depth >= q.max_refinements or budget[0] <= 0:
            raise ToleranceNotMet(
                f"quadrature on [{lo!r}, {hi!r}] did not reach {tol:.3g} "
                f"(error estimate {abs(est - whole):.3g} near [{a!r}, {b!r}])")
        stack.append((a, m, left, 0.5 * t, depth + 1))
        stack.append((m, b, right, 0.5 * t, depth + 1))
    return total


def _sup_estimate(fn, a, b, extra, vectorized) -> float:
    pts = np.concatenate([np.linspace(a, b, 129, endpoint=False), np.asarray(extra, float)])
    return float(np.max(np.abs(_values(fn, pts, vectorized)))) if len(pts) else 0.0


def integrate(g: Derivator, f: Union[Callable, Integrand], a: float, b: float,
              q: Optional[Quadrature] = None):
    """Oriented integral of f against mu_g from a to b.

    For a <= b this is the integral over [a, b); for a > b it is minus the
    integral over [b, a).
    """
    q = q or DEFAULT_QUADRATURE
    a, b = float(a), float(b)
    if a > b:
        if not q.oriented:
            raise ValidationError("a > b with orientation disabled")
        return -integrate(g, f, b, a, q)
    g._check(a)
    g._check(b)
    if a == b:
        return 0.0
    fn, bound, vectorized = _unpack(f)

    mass_tol = None
    if g.generator is not None:
        sup = bound
        if sup is None:
            sup = _sup_estimate(fn, a, b, g.jumps_in(a, b, mass_tol=1e-3).locations, vectorized)
        mass_tol = 0.5 * q.abs_tol / max(sup, 1e-300)
    js = g.jumps_in(a, b, mass_tol=mass_tol)
    atoms = 0.0
    if len(js.sizes):
        atoms = np.dot(_values(fn, js.locations, vectorized), js.sizes)

    cuts = sorted(set([a, b] + g.breakpoints(a, b) + [t for t in js.locations if a < t < b]))
    pieces = []
    for lo, hi in zip(cuts, cuts[1:]):
        c = g.slope_right(lo)
        if c > 0:
            pieces.append((lo, hi, c))
    cont = 0.0
    if pieces:
        weight = sum(c * (hi - lo) for lo, hi, c in pieces)
        budget = [20000]
        for lo, hi, c in pieces:
            tol = 0.5 * q.abs_tol * (hi - lo) / weight
            cont = cont + c * _adaptive(fn, lo, hi, tol, q, vectorized, budget)
    return atoms + cont


# ---------------------------------------------------------------------------
# iterated integrals by marching
@dataclass(frozen=True)
class Link:
    """F_i = factor * integral from x0 of F_parent (times Delta g when atomic)."""

    parent: int
    factor: float
    atomic: bool = False


def iterated_integrals(g: Derivator, x0: float, x: float, links: Sequence[Link],
                       points: Optional[int] = None, mass_tol: float = 1e-15) -> np.ndarray:
    """Values at x of a chain of iterated integrals against mu_g.

    ``F_0 = 1`` and, for i >= 1, ``F_i(x) = factor_i * int_{x0}^{x} phi_i dmu_g``
    with ``phi_i = F_{parent_i}`` (multiplied by the jump function when the
    link is atomic).  The chain is integrated piece by piece: every atom is an
    exact update, and on each affine piece of g^C the integrands are sampled
    at Gauss-Legendre nodes and integrated with a spectral cumulative rule,
    exact for polynomial integrands of degree below ``points``.
    """
    g._check(x0)
    g._check(x)
    n = len(links) + 1
    for i, ln in enumerate(links, start=1):
        if not 0 <= ln.parent < i:
            raise ValidationError("links must refer to earlier functions")
    p = points or max(12, n + 2)
    nodes, w, S = _cumulative(p)
    F = np.zeros(n)
    F[0] = 1.0
    if x == x0:
        return F
    lo, hi = min(x0, x), max(x0, x)
    js = g.jumps_in(lo, hi, mass_tol=mass_tol)
    jump = dict(zip(js.locations.tolist(), js.sizes.tolist()))
    cuts = sorted(set([lo, hi] + g.breakpoints(lo, hi) + [t for t in jump if lo < t < hi]))

    def atom(F, d):
        # value at t^+ from value at t (rightward) or inverse (leftward)
        out = F.copy()
        for i, ln in enumerate(links, start=1):
            out[i] = F[i] + ln.factor * F[ln.parent] * d * (d if ln.atomic else 1.0)
        return out

    def atom_back(Fp, d):
        out = Fp.copy()
        for i, ln in enumerate(links, start=1):
            out[i] = Fp[i] - ln.factor * out[ln.parent] * d * (d if ln.atomic else 1.0)
        return out

    def flow(F, c, h, forward):
        # integrate the chain across an atom-free piece of length h and slope c
        V = np.empty((n, p))
        V[0] = 1.0
        out = F.copy()
        half = 0.5 * h
        for i, ln in enumerate(links, start=1):
            if ln.atomic or c == 0:
                V[i] = F[i]
                continue
            src = V[ln.parent]
            tot = half * np.dot(w, src)
            if forward:
                V[i] = F[i] + ln.factor * c * half * (S @ src)
                out[i] = F[i] + ln.factor * c * tot
            else:
                V[i] = F[i] - ln.factor * c * (tot - half * (S @ src))
                out[i] = F[i] - ln.factor * c * tot
        return out

    if x > x0:
        for t, t2 in zip(cuts, cuts[1:]):
            if t in jump:
                F = atom(F, jump[t])
            F = flow(F, g.slope_right(t), t2 - t, True)
    else:
        rev = cuts[::-1]
        for z, t in zip(rev, rev[1:]):
            F = flow(F, g.slope_left(z), z - t, False)
            if t in jump:
                F = atom_back(F, jump[t])
    return F


# ---------------------------------------------------------------------------
# numerical g-derivative
ACCEPT_RTOL = 1e-9
CAUCHY_RTOL = 1e-6


def _extrapolate(seq, h0: float, order: Optional[int], levels: int = 16):
    """Richardson extrapolation of seq(h) as h -> 0 along h0 / 2^k.

    ``order`` is the power step of the error expansion (1 for one-sided
    quotients, 2 for symmetric ones); ``None`` disables extrapolation.
    Returns the estimate, raising LimitNotConverged when successive estimates
    fail the Cauchy test.
    """
    rows: list[list] = []
    prev = None
    best, best_diff = None, math.inf
    for k in range(levels):
        v = seq(h0 / 2 ** k)
        row = [v]
        if order is not None and rows:
            for j in range(1, min(k, 6) + 1):
                fac = 2.0 ** (order * j)
                row.append(row[j - 1] + (row[j - 1] - rows[-1][j - 1]) / (fac - 1.0))
        est = row[-1]
        rows.append(row)
        if prev is not None:
            diff = abs(est - prev)
            if diff < best_diff:
                best, best_diff = est, diff
            if diff <= ACCEPT_RTOL * (1.0 + abs(est)):
                return est
        prev = est
    if best is not None and best_diff <= CAUCHY_RTOL * (1.0 + abs(best)):
        return best
    raise LimitNotConverged(f"difference quotients did not settle (last change {best_diff:.3g})")


def _h0(g: Derivator, dist: float) -> tuple[float, bool]:
    base = 1e-3 * g.span
    if dist <= 0:
        return base, False
    return min(base, 0.5 * dist), True


def right_limit(g: Derivator, f: Callable, x: float, h_schedule: Optional[Sequence[float]] = None):
    """f(x^+) by extrapolating f(x + h) along a halving schedule."""
    if h_schedule is not None:
        return _schedule_limit(lambda h: f(x + h), h_schedule)
    h0, smooth = _h0(g, g.distance_right(x))
    h0 = min(h0, g.window[1] - x)
    if h0 <= 0:
        raise DerivativeUndefined(f"no room to the right of {x!r} inside the window")
    return _extrapolate(lambda h: f(x + h), h0, 1 if smooth else None)


def _schedule_limit(seq, hs):
    prev = None
    for h in hs:
        v = seq(h)
        if prev is not None and abs(v - prev) <= ACCEPT_RTOL * (1.0 + abs(v)):
            return v
        last_diff = abs(v - prev) if prev is not None else math.inf
        prev = v
    if prev is not None and last_diff <= CAUCHY_RTOL * (1.0 + abs(prev)):
        return prev
    raise LimitNotConverged("quotients along the supplied schedule did not settle")


def _one_sided(g, f, x, side, h_schedule):
    fx = f(x)
    gx = g.value(x)
    if side > 0:
        def q(h):
            return (f(x + h) - fx) / (g.value(x + h) - gx)
        dist = g.distance_right(x)
        room = g.window[1] - x
    else:
        def q(h):
            return (fx - f(x - h)) / (gx - g.value(x - h))
        dist = g.distance_left(x)
        room = x - g.window[0]
    if room <= 0:
        raise DerivativeUndefined(f"one-sided quotient at {x!r} leaves the window")
    if h_schedule is not None:
        return _schedule_limit(q, h_schedule)
    h0, smooth = _h0(g, dist)
    return _extrapolate(q, min(h0, room), 1 if smooth else None)


def _jump_quotient(g, f, x, h_schedule):
    d = g.delta(x)
    return (right_limit(g, f, x, h_schedule) - f(x)) / d


def g_derivative(g: Derivator, f: Callable, x: float,
                 h_schedule: Optional[Sequence[float]] = None):
    """Numerical Stieltjes derivative f'_g(x).

    * jump points: (f(x^+) - f(x)) / Delta g(x);
    * points inside a constancy interval (a_n, b_n): the right-sided quotient
      taken at b_n;
    * right ends of constancy intervals: right-sided quotient;
    * left ends: left-sided quotient;
    * everything else: two-sided quotient.
    """
    x = float(x)
    cls = g.classify(x)
    if cls.tag is PointTag.JUMP:
        return _jump_quotient(g, f, x, h_schedule)
    if cls.tag is PointTag.CONSTANT_INTERIOR:
        b = cls.component_end
        if not math.isfinite(b) or b >= g.window[1]:
            raise DerivativeUndefined(
                f"{x!r} lies in a constancy interval with no right end inside the window")
        if g.delta(b) > 0:
            return _jump_quotient(g, f, b, h_schedule)
        return _one_sided(g, f, b, +1, h_schedule)
    if cls.tag is PointTag.RIGHT_ENDPOINT:
        return _one_sided(g, f, x, +1, h_schedule)
    if cls.tag is PointTag.LEFT_ENDPOINT:
        return _one_sided(g, f, x, -1, h_schedule)
    lo, hi = g.window
    if x >= hi:
        return _one_sided(g, f, x, -1, h_schedule)
    if x <= lo:
        return _one_sided(g, f, x, +1, h_schedule)
    def sym(h):
        return (f(x + h) - f(x - h)) / (g.value(x + h) - g.value(x - h))

    if h_schedule is not None:
        return _schedule_limit(sym, h_schedule)
    dist = min(g.distance_left(x), g.distance_right(x))
    h0, smooth = _h0(g, dist)
    h0 = min(h0, hi - x, x - lo)
    even = smooth and g.slope_left(x) == g.slope_right(x)
    return _extrapolate(sym, h0, (2 if even else 1) if smooth else None)


# ---------------------------------------------------------------------------
# higher-order g-derivatives
def _stencil(f, x: float, k: int, h: float, kind: str):
    """k-th finite difference of f divided by h^k.

    ``forward`` uses x, x+h, ..., x+kh; ``after`` uses x+h, ..., x+(k+1)h
    (nothing at x itself, for limits from the right of a jump); ``backward``
    mirrors ``forward``; ``central`` is centred on x.
    """
    if kind == "central":
        pts = [x + (k / 2 - j) * h for j in range(k + 1)]
    elif kind == "forward":
        pts = [x + (k - j) * h for j in range(k + 1)]
    elif kind == "after":
        pts = [x + (k + 1 - j) * h for j in range(k + 1)]
    else:
        pts = [x - j * h for j in range(k + 1)]
    tot = sum((-1) ** j * math.comb(k, j) * f(p) for j, p in enumerate(pts))
    return tot / h ** k


def _affine_kth(g: Derivator, f: Callable, x: float, k: int, kind: str):
    """k-th g-derivative on a stretch where g is affine in x with no jumps."""
    lo, hi = g.window
    if kind == "central":
        if g.slope_left(x) != g.slope_right(x):
            return None
        slope = g.slope_right(x)
        room = min(g.distance_left(x), g.distance_right(x), hi - x, x - lo)
        span, order = k / 2 + 0.5, 2
    elif kind == "backward":
        slope = g.slope_left(x)
        room = min(g.distance_left(x), x - lo)
        span, order = k + 0.5, 1
    else:
        slope = g.slope_right(x)
        room = min(g.distance_right(x), hi - x)
        span, order = k + 1.5, 1
    if not (slope > 0 and room > 0):
        return None
    h0 = min(0.01 * g.span, 0.1, room / span)
    return _extrapolate(lambda h: _stencil(f, x, k, h, kind), h0, order) / slope ** k


def g_derivative_n(g: Derivator, f: Callable, x: float, n: int):
    """The n-th Stieltjes derivative f^(n)_g(x).

    At a jump, f^(n)(x) = (f^(n-1)(x^+) - f^(n-1)(x)) / Delta g(x), with the
    right limit taken from a one-sided stencil over the affine stretch that
    follows x.  Elsewhere a k-th order stencil in the variable g is used
    where g is locally affine; otherwise first derivatives are nested.
    """
    x = float(x)
    if n < 0 or int(n) != n:
        raise ValidationError("derivative order must be a non-negative integer")
    if n == 0:
        return f(x)
    if n == 1:
        return g_derivative(g, f, x)
    cls = g.classify(x)
    if cls.tag is PointTag.CONSTANT_INTERIOR:
        b = cls.component_end
        if not math.isfinite(b) or b >= g.window[1]:
            raise DerivativeUndefined(
                f"{x!r} lies in a constancy interval with no right end inside the window")
        x, cls = b, g.classify(b)
    if cls.tag is PointTag.JUMP:
        k = n - 1
        if k == 0:
            right = right_limit(g, f, x)
        else:
            right = _affine_kth(g, f, x, k, "after")
            if right is None:
                right = right_limit(g, lambda y: g_derivative_n(g, f, y, k), x)
        return (right - g_derivative_n(g, f, x, k)) / g.delta(x)
    kind = {PointTag.RIGHT_ENDPOINT: "forward", PointTag.LEFT_ENDPOINT: "backward"}.get(cls.tag, "central")
    v = _affine_kth(g, f, x, n, kind)
    if v is not None:
        return v
    return g_derivative(g, lambda y: g_derivative_n(g, f, y, n - 1), x)
