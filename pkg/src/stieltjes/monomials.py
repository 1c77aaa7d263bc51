"""g-monomials g_{x0,n}: closed forms, C/B decomposition and an integral oracle.

Route summary

* ``CONTINUOUS``: no jumps at all, ``g_n = g_1**n``.
* ``JUMP``: constant continuous part; ``n! e_n`` of the jump sizes in
  [x0, x) to the right of the centre and ``(-1)^n n! h_n`` of those in
  [x, x0) to the left (e_n, h_n elementary / complete homogeneous
  symmetric polynomials).
* ``DECOMPOSITION``: the binomial combination of continuous-part monomials
  ``(g^C(x) - g^C(x0))**k`` and jump-part monomials.  Works for every
  derivator.
* ``ORACLE``: iterated integrals of the defining recursion, evaluated by
  :func:`stieltjes.integral.iterated_integrals`.  Never chosen automatically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .derivator import Derivator
from .errors import RouteUnavailable, ValidationError
from .integral import Link, Quadrature, iterated_integrals

# generator jumps are materialised until the neglected mass drops below this
MASS_TOL = 1e-15


class Route(Enum):
    AUTO = "auto"
    CONTINUOUS = "continuous"
    JUMP = "jump"
    DECOMPOSITION = "decomposition"
    ORACLE = "oracle"


@dataclass(frozen=True)
class MonomialRequest:
    g: Derivator
    x0: float
    n: int
    route: Route = Route.AUTO

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 0:
            raise ValidationError("monomial degree must be a non-negative integer")
        self.g._check(self.x0)


@dataclass(frozen=True)
class HFunctionRequest:
    g: Derivator
    x0: float
    j: int
    k: int
    x: float

    def __post_init__(self):
        if self.j < 1 or self.k < 0:
            raise ValidationError("h-functions need j >= 1 and k >= 0")


def factorial(n: int) -> float:
    """n! as a float: exact up to 20, via log-gamma beyond."""
    if n <= 20:
        return float(math.factorial(n))
    return math.exp(math.lgamma(n + 1))


# ---------------------------------------------------------------- symmetric polynomials
def elementary_symmetric(sizes: Sequence[float], N: int) -> np.ndarray:
    """e_0..e_N of the given values (one dynamic-programming pass per value)."""
    e = np.zeros(N + 1)
    e[0] = 1.0
    for a in sizes:
        e[1:] = e[1:] + a * e[:-1]
    return e


def complete_symmetric(sizes: Sequence[float], N: int) -> np.ndarray:
    """h_0..h_N of the given values."""
    h = np.zeros(N + 1)
    h[0] = 1.0
    for a in sizes:
        for k in range(1, N + 1):
            h[k] += a * h[k - 1]
    return h


def jump_monomial_right(sizes: Sequence[float], n: int) -> float:
    """n! e_n(sizes), carrying k! e_k through the recursion."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    E = [1.0] + [0.0] * n
    for a in sizes:
        for k in range(n, 0, -1):
            E[k] += k * a * E[k - 1]
    return E[n]


def jump_monomial_left(sizes: Sequence[float], n: int) -> float:
    """(-1)^n n! h_n(sizes), carrying k! h_k through the recursion."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    H = [1.0] + [0.0] * n
    for a in sizes:
        for k in range(1, n + 1):
            H[k] += k * a * H[k - 1]
    return H[n] if n % 2 == 0 else -H[n]


# ---------------------------------------------------------------- core evaluators
def _jump_sizes(g: Derivator, x0: float, x: float) -> np.ndarray:
    lo, hi = (x0, x) if x >= x0 else (x, x0)
    return g.jumps_in(lo, hi, mass_tol=MASS_TOL).sizes


def scaled_continuous(g: Derivator, x0: float, N: int, x: float) -> np.ndarray:
    """(g^C(x) - g^C(x0))^k / k!  for k = 0..N."""
    c1 = g.continuous(x) - g.continuous(x0)
    out = np.empty(N + 1)
    out[0] = 1.0
    for k in range(1, N + 1):
        out[k] = out[k - 1] * c1 / k
    return out


def scaled_jump(g: Derivator, x0: float, N: int, x: float) -> np.ndarray:
    """Jump-part monomials divided by n!, n = 0..N."""
    sizes = _jump_sizes(g, x0, x)
    if x >= x0:
        return elementary_symmetric(sizes, N)
    h = complete_symmetric(sizes, N)
    h[1::2] *= -1.0
    return h


def normalized_monomials(g: Derivator, x0: float, N: int, x: float) -> np.ndarray:
    """g_{x0,n}(x) / n! for n = 0..N via the C/B decomposition.

    Dividing by n! turns the binomial decomposition into a plain Cauchy
    product, which avoids overflow for large N.
    """
    g._check(x0)
    g._check(x)
    c = scaled_continuous(g, x0, N, x)
    b = scaled_jump(g, x0, N, x)
    return np.convolve(c, b)[: N + 1]


def log_normalized_monomials(g: Derivator, x0: float, N: int, x: float):
    """Sign and log-magnitude of g_{x0,n}(x) / n!, n = 0..N.

    Same decomposition as :func:`normalized_monomials`, but jump sizes are
    rescaled by their maximum and the Cauchy product is taken as a signed
    log-sum, so nothing under- or overflows for large N.
    """
    g._check(x0)
    g._check(x)
    c1 = g.continuous(x) - g.continuous(x0)
    k = np.arange(N + 1)
    with np.errstate(divide="ignore"):
        lc = k * math.log(abs(c1)) if c1 != 0 else np.where(k == 0, 0.0, -np.inf)
    lc = lc - np.array([math.lgamma(i + 1) for i in k])
    sc = np.where((k % 2 == 1) & (c1 < 0), -1.0, 1.0)
    sizes = _jump_sizes(g, x0, x)
    sigma = float(np.max(sizes)) if len(sizes) else 1.0
    if x >= x0:
        b = elementary_symmetric(sizes / sigma, N)
    else:
        b = complete_symmetric(sizes / sigma, N)
        b[1::2] *= -1.0
    with np.errstate(divide="ignore"):
        lb = np.log(np.abs(b)) + k * math.log(sigma)
    sb = np.sign(b)
    sign = np.zeros(N + 1)
    logm = np.full(N + 1, -np.inf)
    for n in range(N + 1):
        L = lc[: n + 1] + lb[n::-1]
        m = np.max(L)
        if m == -np.inf:
            continue
        v = float(np.sum(sc[: n + 1] * sb[n::-1] * np.exp(L - m)))
        if v != 0:
            sign[n] = math.copysign(1.0, v)
            logm[n] = m + math.log(abs(v))
    return sign, logm


def monomials_upto(g: Derivator, x0: float, N: int, x: float) -> np.ndarray:
    """g_{x0,0}(x), ..., g_{x0,N}(x)."""
    gam = normalized_monomials(g, x0, N, x)
    return np.array([gam[n] * factorial(n) for n in range(N + 1)])


def resolve_route(g: Derivator, route: Route = Route.AUTO) -> Route:
    if route is not Route.AUTO:
        return route
    if not g.has_jumps():
        return Route.CONTINUOUS
    if g.continuous_is_constant():
        return Route.JUMP
    return Route.DECOMPOSITION


def monomial(req: MonomialRequest, x: float) -> float:
    """Value of g_{x0,n}(x) along the requested route."""
    g, x0, n = req.g, float(req.x0), int(req.n)
    x = float(x)
    g._check(x)
    route = resolve_route(g, req.route)
    if route is Route.CONTINUOUS:
        if g.has_jumps():
            raise RouteUnavailable("continuous closed form needs a derivator without jumps")
        return (g.value(x) - g.value(x0)) ** n
    if route is Route.JUMP:
        if not g.continuous_is_constant():
            raise RouteUnavailable("jump closed form needs a constant continuous part")
        sizes = _jump_sizes(g, x0, x)
        return jump_monomial_right(sizes, n) if x >= x0 else jump_monomial_left(sizes, n)
    if route is Route.DECOMPOSITION:
        return float(normalized_monomials(g, x0, n, x)[n] * factorial(n))
    if route is Route.ORACLE:
        return monomial_oracle(g, x0, n, x)
    raise RouteUnavailable(f"unknown route {route!r}")


def g_monomial(g: Derivator, x0: float, n: int, x: float, route: Route | str = Route.AUTO) -> float:
    """Shorthand for ``monomial(MonomialRequest(g, x0, n, route), x)``."""
    return monomial(MonomialRequest(g, x0, n, Route(route)), x)


def monomial_oracle(g: Derivator, x0: float, n: int, x: float,
                    q: Optional[Quadrature] = None) -> float:
    """g_{x0,n}(x) straight from the recursive integral definition."""
    if n < 0:
        raise ValidationError("n must be non-negative")
    tol = MASS_TOL if q is None else min(MASS_TOL, q.abs_tol * 1e-5)
    links = [Link(i - 1, float(i)) for i in range(1, n + 1)]
    return float(iterated_integrals(g, float(x0), float(x), links, mass_tol=tol)[n])


def oracle_upto(g: Derivator, x0: float, N: int, x: float) -> np.ndarray:
    """Oracle values g_{x0,0}(x), ..., g_{x0,N}(x) from one integration pass."""
    links = [Link(i - 1, float(i)) for i in range(1, N + 1)]
    return iterated_integrals(g, float(x0), float(x), links, mass_tol=MASS_TOL)


def change_center(g: Derivator, r: float, s: float, n: int, x: float) -> float:
    """Right-hand side of g_{r,n}(x) = sum_k C(n,k) g_{r,k}(s) g_{s,n-k}(x)."""
    left = monomials_upto(g, r, n, s)
    right = monomials_upto(g, s, n, x)
    return float(sum(math.comb(n, k) * left[k] * right[n - k] for k in range(n + 1)))


def monomial_bounds(g: Derivator, x0: float, n: int, x: float) -> tuple[float, float]:
    """Bounds on g_{x0,n}(x).

    To the right of x0 this is ``(max(g^C_n, g^B_n), g_1**n)`` for the
    monomial itself; to the left it is ``(|g_1|**n, n! |g_1|**n)`` for its
    absolute value.
    """
    if n == 0:
        return 1.0, 1.0
    g1 = g.eval(x) - g.eval(x0)
    if x >= x0:
        gc = (g.continuous(x) - g.continuous(x0)) ** n
        gb = jump_monomial_right(_jump_sizes(g, x0, x), n)
        return float(max(gc, gb)), float(g1 ** n)
    a = abs(g1) ** n
    return float(a), float(factorial(n) * a)


def _h_links(j: int, k: int) -> list[Link]:
    links = [Link(i - 1, float(i)) for i in range(1, k + 1)]
    links.append(Link(k, float(k + 1), atomic=True))
    for jj in range(1, j):
        links.append(Link(len(links), float(k + jj + 1)))
    return links


def h_function(req: HFunctionRequest) -> float:
    """h_{j,k}(x) from its recursive integral definition."""
    links = _h_links(req.j, req.k)
    return float(iterated_integrals(req.g, float(req.x0), float(req.x), links,
                                    mass_tol=MASS_TOL)[-1])


def h_value(g: Derivator, x0: float, j: int, k: int, x: float) -> float:
    return h_function(HFunctionRequest(g, x0, j, k, x))


def recursion_first(g: Derivator, x0: float, n: int, x: float) -> float:
    """g_{n-1} g_1 - sum_{j=1}^{n-1} h_{j,n-1-j}, which should equal g_n."""
    gv = monomials_upto(g, x0, n, x)
    return float(gv[n - 1] * gv[1] - sum(h_value(g, x0, j, n - 1 - j, x) for j in range(1, n)))


def recursion_second(g: Derivator, x0: float, n: int, x: float) -> float:
    """g_1^n - sum_k g_1^{n-1-k} sum_{j<=k} h_{j,k-j}, which should equal g_n."""
    g1 = g.eval(x) - g.eval(x0)
    tot = g1 ** n
    for k in range(1, n):
        inner = sum(h_value(g, x0, j, k - j, x) for j in range(1, k + 1))
        tot -= g1 ** (n - 1 - k) * inner
    return float(tot)
