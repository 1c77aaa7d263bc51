"""The g-exponential exp_g(lam; x0): series, product form and whole-line extension.

For x >= x0

    exp_g(lam; x0)(x) = e^{lam (g^C(x) - g^C(x0))} * prod_{y in [x0, x)} (1 + lam * dg(y))

and to the left the factors are inverted over [x, x0).  The series
sum lam^n g_n / n! converges on Omega, which is the whole line unless a jump
below x0 has size >= 1/|lam|.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .derivator import INF, Derivator
from .errors import (HypothesisViolated, NotCertified, OutsideDomain, SingularFactor,
                     ValidationError)
from .series import (ConvergenceDomain, GSeries, SeriesValue, TailKind, TailRule,
                     eval_series_detailed)

# a factor 1 + lam * dg counts as zero below this magnitude
ZERO_FACTOR = 1e-14


def _check_lambda(lam):
    if lam == 0:
        raise ValidationError("lambda must be non-zero")
    if not cmath.isfinite(lam):
        raise ValidationError("lambda must be finite")


def omega_domain(g: Derivator, x0: float, lam) -> ConvergenceDomain:
    """Domain of absolute convergence of the exponential series centred at x0."""
    _check_lambda(lam)
    thr = 1.0 / abs(lam)
    big = g.jumps_in(-INF, float(x0), min_size=thr)
    locs = [x for x, d in zip(big.locations, big.sizes) if d >= thr]
    if not locs:
        return ConvergenceDomain.whole()
    return ConvergenceDomain.left_bounded(max(locs))


def _vanishing_jumps(g: Derivator, lam, below: float) -> list[float]:
    """Jump locations y < below with 1 + lam * dg(y) = 0."""
    if isinstance(lam, complex) and lam.imag != 0:
        return []
    lam = float(lam.real if isinstance(lam, complex) else lam)
    if lam >= 0:
        return []
    target = -1.0 / lam
    out = [x for x, d in g.jumps if x < below and abs(1.0 + lam * d) <= ZERO_FACTOR]
    gen = g.generator
    if gen is not None:
        k = round(1 + math.log(target / gen.first_size) / math.log(gen.ratio))
        for kk in (k - 1, k, k + 1):
            if kk >= 1 and abs(1.0 + lam * gen.size(kk)) <= ZERO_FACTOR and gen.location(kk) < below:
                out.append(gen.location(kk))
    return sorted(out)


@dataclass(frozen=True)
class ExpG:
    g: Derivator
    lam: complex
    x0: float
    domain: ConvergenceDomain = field(init=False)
    nonvanishing_left: bool = field(init=False)
    extendable: bool = field(init=False)

    def __post_init__(self):
        _check_lambda(self.lam)
        object.__setattr__(self, "x0", float(self.x0))
        self.g._check(self.x0)
        object.__setattr__(self, "domain", omega_domain(self.g, self.x0, self.lam))
        ok = not _vanishing_jumps(self.g, self.lam, self.x0)
        object.__setattr__(self, "nonvanishing_left", ok)
        object.__setattr__(self, "extendable", ok)

    def series(self) -> GSeries:
        return GSeries(self.g, self.x0, (), TailRule(TailKind.EXP, self.lam, 1.0))


def _materialised(g: Derivator, lo: float, hi: float, lam, abs_tol: float):
    # include generator jumps until |lam| * (neglected mass) <= abs_tol / 2
    return g.jumps_in(lo, hi, mass_tol=0.5 * abs_tol / abs(lam))


def _product_value(g: Derivator, x0: float, lam, x: float, abs_tol: float, invert_singular):
    c1 = g.continuous(x) - g.continuous(x0)
    cplx = isinstance(lam, complex)
    base = cmath.exp(lam * c1) if cplx else math.exp(lam * c1)
    if x >= x0:
        js = _materialised(g, x0, x, lam, abs_tol)
        factors = 1.0 + lam * js.sizes.astype(complex if cplx else float)
        return base * _prod(factors)
    js = _materialised(g, x, x0, lam, abs_tol)
    factors = 1.0 + lam * js.sizes.astype(complex if cplx else float)
    bad = np.abs(factors) <= ZERO_FACTOR
    if np.any(bad):
        y = float(js.locations[np.argmax(bad)])
        raise invert_singular(f"1 + lambda * dg({y!r}) = 0 at a jump in [x, x0)")
    return base / _prod(factors)


def _prod(factors: np.ndarray):
    if len(factors) == 0:
        return 1.0
    out = factors[0]
    for f in factors[1:]:
        out = out * f
    return complex(out) if np.iscomplexobj(factors) else float(out)


def exp_product(E: ExpG, x: float, abs_tol: float = 1e-15):
    """Product form of the exponential (inverse product to the left of x0)."""
    x = float(x)
    E.g._check(x)
    return _product_value(E.g, E.x0, E.lam, x, abs_tol, SingularFactor)


def exp_extended(g: Derivator, x0: float, lam, x: float, abs_tol: float = 1e-15):
    """Exp_g(lam; x0)(x): the exponential extended to the whole line."""
    _check_lambda(lam)
    x0, x = float(x0), float(x)
    g._check(x0)
    g._check(x)
    bad = _vanishing_jumps(g, lam, x0)
    if bad:
        raise HypothesisViolated(f"1 + lambda * dg(y) = 0 at y = {bad[-1]!r} < x0: no extension")
    return _product_value(g, x0, lam, x, abs_tol, HypothesisViolated)


# direct summation is used while |lam| * g_1(x) stays below this; beyond it
# the value is accumulated through the re-centring identity over short pieces
DIRECT_LIMIT = 2.0


def _chain_points(g: Derivator, x0: float, x: float, lam) -> list[float]:
    """x0 = s_0 < s_1 < ... < s_k = x with |lam| * g^C-increment <= 1 per piece
    and every sizeable jump at the start of its own piece."""
    step = 1.0 / abs(lam)
    js = g.jumps_in(x0, x, min_size=0.1 * step)
    pts = {x0, x, *(float(y) for y in js.locations), *g.breakpoints(x0, x)}
    out = []
    srt = sorted(p for p in pts if x0 <= p <= x)
    for a, b in zip(srt, srt[1:]):
        out.append(a)
        dc = g.continuous(b) - g.continuous(a) + g.jump_mass(a, b) - g.delta(a)
        k = int(math.ceil(abs(lam) * max(dc, 0.0)))
        if k > 1:
            # split the piece evenly in x; pieces are affine in g^C
            out.extend(a + (b - a) * i / k for i in range(1, k))
    out.append(srt[-1])
    return out


def exp_series_detailed(E: ExpG, x: float, abs_tol: float = 1e-12):
    x = float(x)
    E.g._check(x)
    if not E.domain.contains(x):
        raise OutsideDomain(f"x = {x!r} is outside {E.domain}")
    S = E.series()
    if x >= E.x0:
        g1 = E.g.value(x) - E.g.value(E.x0)
        if abs(E.lam) * g1 <= DIRECT_LIMIT:
            return eval_series_detailed(S, x, abs_tol)
        return _chained(E, x, abs_tol)
    g1 = E.g.value(x) - E.g.value(E.x0)
    if abs(E.lam * g1) < 1:
        try:
            return eval_series_detailed(S, x, abs_tol)
        except NotCertified:
            pass
    if not E.nonvanishing_left:
        raise NotCertified(f"cannot certify the series at {x!r} and the extension does not exist")
    return SeriesValue(exp_extended(E.g, E.x0, E.lam, x), 0, 0.0, True)


def _chained(E: ExpG, x: float, abs_tol: float):
    """exp_g(lam; x0)(x) = prod_i exp_g(lam; s_i)(s_{i+1}), each factor a short series."""
    pts = _chain_points(E.g, E.x0, x, E.lam)
    val = 1.0
    terms = 0
    bound = 0.0
    for a, b in zip(pts, pts[1:]):
        piece = eval_series_detailed(GSeries(E.g, a, (), TailRule(TailKind.EXP, E.lam, 1.0)), b,
                                     abs_tol * 1e-3)
        # |prod (v_i + e_i) - prod v_i| <= (|prod| + ...) sum |e_i| / |v_i|, to first order
        bound += piece.tail_bound / max(abs(piece.value), 1e-300)
        val = val * piece.value
        terms += piece.terms
        if val == 0:
            break
    return SeriesValue(val, terms, bound * abs(val), bound * abs(val) <= abs_tol * (1 + abs(val)))


def exp_series(E: ExpG, x: float, abs_tol: float = 1e-12):
    """sum_n lam^n g_n(x) / n!, certified; left of x0 beyond |lam g_1| < 1 the
    value comes from the closed-form extension."""
    return exp_series_detailed(E, x, abs_tol).value


def exp_factors(E: ExpG, x: float, abs_tol: float = 1e-12):
    """The exponential series over g^C and over g^B separately."""
    gc, gb = E.g.split()
    return (exp_series(ExpG(gc, E.lam, E.x0), x, abs_tol),
            exp_series(ExpG(gb, E.lam, E.x0), x, abs_tol))


def exp_recenter_check(g: Derivator, t: float, s: float, x: float, lam,
                       abs_tol: float = 1e-12) -> tuple:
    """(exp_g(lam; t)(s) * exp_g(lam; s)(x), exp_g(lam; t)(x))."""
    Et, Es = ExpG(g, lam, t), ExpG(g, lam, s)
    for E, y in ((Et, s), (Es, x), (Et, x)):
        if not E.domain.contains(float(y)):
            raise OutsideDomain(f"{y!r} is outside the domain {E.domain} of the exponential at {E.x0!r}")
    lhs = exp_series(Et, s, abs_tol) * exp_series(Es, x, abs_tol)
    return lhs, exp_series(Et, x, abs_tol)


def exponential(g: Derivator, lam, x0: float = 0.0) -> ExpG:
    return ExpG(g, lam, x0)
