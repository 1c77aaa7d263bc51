"""Series of g-monomials  f(x) = sum_n a_n g_{x0,n}(x).

Coefficients are a dense prefix a_0..a_{P-1} followed by a tail rule:

* ``zero`` (literal kind ``"none"``): a_n = 0 for n >= P, a finite sum;
* ``exp``: a_n = scale * lam**n / n! for n >= P;
* ``open``: the prefix is a truncation of an infinite series whose remaining
  coefficients are unknown; only a growth certificate M with
  |a_n| <= M**(n+1) / n! (or the trailing-terms test) can vouch for it.

Terms are formed as a_n * n! * (g_n / n!) with the factorial applied in log
space, so long prefixes neither overflow nor lose the small terms.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .derivator import INF, Derivator
from .errors import (BoundViolated, DivergenceDetected, NotCertified, NotIdentifiable,
                     ValidationError)
from .integral import g_derivative, g_derivative_n
from .monomials import factorial, log_normalized_monomials, normalized_monomials

MAX_TERMS = 10000
# relative slack when checking a certificate on stored floats
_CERT_RTOL = 1e-12


class TailKind(Enum):
    ZERO = "none"
    EXP = "exp"
    OPEN = "open"


@dataclass(frozen=True)
class TailRule:
    kind: TailKind = TailKind.ZERO
    lam: complex = 0.0
    scale: complex = 0.0

    def scaled(self, n: int):
        """b_n = a_n n! for an index beyond the prefix."""
        if self.kind is TailKind.EXP:
            return self.scale * self.lam ** n
        return 0.0


ZERO_TAIL = TailRule()
OPEN_TAIL = TailRule(TailKind.OPEN)


@dataclass(frozen=True)
class ConvergenceDomain:
    """Either the whole line or the open half-line (t, +inf)."""
    kind: str = "WholeLine"
    t: float = -INF
    certified: bool = True

    def contains(self, x: float) -> bool:
        return self.kind == "WholeLine" or x > self.t

    @classmethod
    def whole(cls, certified=True):
        return cls("WholeLine", -INF, certified)

    @classmethod
    def left_bounded(cls, t: float, certified=True):
        return cls("LeftBounded", float(t), certified)

    def __str__(self):
        return "WholeLine" if self.kind == "WholeLine" else f"LeftBounded({self.t!r}, open)"


def _is_complex(values) -> bool:
    return any(isinstance(v, complex) or np.iscomplexobj(v) for v in values)


def _coeff_array(values):
    vals = list(values)
    return np.array(vals, dtype=complex if _is_complex(vals) else float)


@dataclass(frozen=True, eq=False)
class GSeries:
    g: Derivator
    center: float
    coeffs: tuple = ()
    tail: TailRule = ZERO_TAIL
    growth_cert: Optional[float] = None
    # certificate amplitude A: |a_n| <= A * M^(n+1) / n!
    cert_amplitude: float = 1.0
    # (t1, t2) within which term-wise derivatives are known to converge
    validity: Optional[tuple] = None
    _a: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "center", float(self.center))
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        self.g._check(self.center)
        a = _coeff_array(self.coeffs)
        if not np.all(np.isfinite(a)):
            raise ValidationError("series coefficients must be finite")
        object.__setattr__(self, "_a", a)
        if self.growth_cert is None and self.tail.kind is TailKind.EXP:
            object.__setattr__(self, "growth_cert", self._exp_cert())
        if self.growth_cert is not None:
            M = float(self.growth_cert)
            if not M >= 1.0 or not math.isfinite(M):
                raise ValidationError("growth certificate must be a finite M >= 1")
            object.__setattr__(self, "growth_cert", M)
            A = float(self.cert_amplitude)
            if not (A > 0 and math.isfinite(A)):
                raise ValidationError("certificate amplitude must be positive and finite")
            object.__setattr__(self, "cert_amplitude", A)
            bad = self.cert_violation(M, A)
            if bad is not None:
                raise BoundViolated(f"|a_{bad}| exceeds A M^(n+1)/n! with M = {M!r}, A = {A!r}")

    # ------------------------------------------------------------ coefficients
    @property
    def prefix_length(self) -> int:
        return len(self.coeffs)

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._a) or isinstance(self.tail.lam, complex) \
            or isinstance(self.tail.scale, complex)

    def log_scaled(self) -> np.ndarray:
        """log(|a_n| n!) over the prefix (-inf for zero coefficients)."""
        n = np.arange(len(self._a))
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self._a)) + _lfact(n)

    def coefficient(self, n: int):
        if n < len(self.coeffs):
            return self.coeffs[n]
        if self.tail.kind is TailKind.EXP:
            return self.tail.scale * self.tail.lam ** n / factorial(n)
        return 0.0

    def coefficients(self, N: int) -> list:
        return [self.coefficient(n) for n in range(N + 1)]

    def _exp_cert(self) -> float:
        P = len(self._a)
        lam, scale = abs(self.tail.lam), abs(self.tail.scale)
        M = max(1.0, lam)
        for n, lb in enumerate(self.log_scaled()):
            if lb > -INF:
                M = max(M, math.exp(lb / (n + 1)))
        if scale > 0 and lam > 0:
            M = max(M, math.exp((math.log(scale) + P * math.log(lam)) / (P + 1)))
        elif scale > 0:
            M = max(M, scale ** (1.0 / (P + 1)))
        return M * (1 + 1e-12)

    def cert_violation(self, M: float, A: float = 1.0) -> Optional[int]:
        """First prefix index violating |a_n| n! <= A M^(n+1), or None."""
        logM, logA = math.log(M), math.log(A)
        tiny = np.finfo(float).tiny
        for n, lb in enumerate(self.log_scaled()):
            if 0 < abs(self._a[n]) < tiny:
                # subnormal: no relative precision left to check against
                continue
            cap = logA + (n + 1) * logM
            # log-domain rounding grows with log n!
            if lb > cap + _CERT_RTOL * (1 + abs(cap) + math.lgamma(n + 1)):
                return n
        return None

    def __eq__(self, other):
        if not isinstance(other, GSeries):
            return NotImplemented
        return (self.g == other.g and self.center == other.center and self.coeffs == other.coeffs
                and self.tail == other.tail and self.growth_cert == other.growth_cert
                and self.cert_amplitude == other.cert_amplitude)

    def __hash__(self):
        return hash((self.center, self.coeffs, self.tail))


@dataclass(frozen=True)
class SeriesValue:
    value: Any
    terms: int
    tail_bound: float
    certified: bool


# ---------------------------------------------------------------- tail bounds
def _poisson_tail(z: float, N: int) -> float:
    """sum_{n>N} z^n / n!  for z >= 0, bounded by a geometric majorant."""
    if z == 0:
        return 0.0
    if N + 2 <= z:
        return INF
    first = math.exp((N + 1) * math.log(z) - math.lgamma(N + 2))
    return first / (1.0 - z / (N + 2))


def _geometric_tail(q: float, N: int) -> float:
    if q >= 1:
        return INF
    if q == 0:
        return 0.0
    return math.exp((N + 1) * math.log(q)) / (1.0 - q)


def _tail_after(S: GSeries, g1: float, right: bool, N: int) -> float:
    """Bound on |sum_{n>N} a_n g_n(x)| given |g_1(x)|."""
    P = S.prefix_length
    z = abs(g1)
    if S.tail.kind is TailKind.ZERO:
        if N >= P - 1:
            return 0.0
        if S.growth_cert is None:
            return INF
    elif S.tail.kind is TailKind.EXP and N >= P - 1:
        lam, scale = abs(S.tail.lam), abs(S.tail.scale)
        t = _poisson_tail(lam * z, N) if right else _geometric_tail(lam * z, N)
        return scale * t
    if S.growth_cert is None:
        return INF
    M = S.growth_cert
    t = _poisson_tail(M * z, N) if right else _geometric_tail(M * z, N)
    return S.cert_amplitude * M * t


def _choose_terms(S: GSeries, g1: float, right: bool, abs_tol: float) -> Optional[int]:
    """Smallest N >= P-1 with certified tail <= abs_tol, or None."""
    N = max(S.prefix_length - 1, 0)
    if _tail_after(S, g1, right, N) <= abs_tol:
        return N
    if S.tail.kind is not TailKind.EXP:
        return None
    lo, hi = N, N + 1
    while _tail_after(S, g1, right, hi) > abs_tol:
        if hi >= MAX_TERMS:
            return None
        lo, hi = hi, min(2 * hi, MAX_TERMS)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _tail_after(S, g1, right, mid) <= abs_tol:
            hi = mid
        else:
            lo = mid
    return hi


def _lfact(n):
    return _LGAMMA(np.asarray(n) + 1.0)


_LGAMMA = np.vectorize(math.lgamma, otypes=[float])


def _times_exp(v: np.ndarray, logw: np.ndarray) -> np.ndarray:
    """v * exp(logw) without intermediate overflow (zero stays zero)."""
    v = np.asarray(v)
    out = np.zeros(v.shape, dtype=v.dtype)
    nz = v != 0
    if np.any(nz):
        mag = np.abs(v[nz])
        out[nz] = (v[nz] / mag) * np.exp(np.log(mag) + logw[nz])
    return out


def _terms(S: GSeries, x: float, N: int) -> np.ndarray:
    """a_n g_n(x) for n = 0..N."""
    sign, lgam = log_normalized_monomials(S.g, S.center, N, x)
    P = S.prefix_length
    k = min(P, N + 1)
    dtype = complex if S.is_complex else float
    out = np.zeros(N + 1, dtype=dtype)
    if k:
        out[:k] = _times_exp(S._a[:k] * sign[:k], lgam[:k] + _lfact(np.arange(k)))
    if S.tail.kind is TailKind.EXP and N >= P:
        n = np.arange(P, N + 1)
        lam, scale = S.tail.lam, S.tail.scale
        if lam == 0:
            out[P:] = np.where(n == 0, scale * sign[P:] * np.exp(lgam[P:]), 0.0)
        else:
            with np.errstate(divide="ignore"):
                logw = n * math.log(abs(lam)) + lgam[P:]
            phase = (lam / abs(lam)) ** n
            out[P:] = _times_exp(scale * phase * sign[P:], logw)
    return out


def eval_series_detailed(S: GSeries, x: float, abs_tol: float = 1e-10,
                         heuristic: bool = False) -> SeriesValue:
    """Partial sum with its tail bound.

    ``heuristic=True`` sums what is stored (or a fixed number of exponential
    tail terms) without certification and always reports certified=False.
    """
    x = float(x)
    S.g._check(x)
    if abs_tol <= 0:
        raise ValidationError("abs_tol must be positive")
    right = x >= S.center
    g1 = S.g.value(x) - S.g.value(S.center)
    P = S.prefix_length
    if heuristic:
        N = max(P - 1, 0) if S.tail.kind is not TailKind.EXP else max(P - 1, 200)
        terms = _terms(S, x, N)
        return SeriesValue(_total(terms), N + 1, INF, False)
    N = _choose_terms(S, g1, right, abs_tol)
    if N is not None:
        val = _total(_terms(S, x, N))
        # a closed-form tail is cheap to extend: go on to full double precision
        fine = 1e-17 * max(1.0, abs(val))
        if S.tail.kind is TailKind.EXP and fine < abs_tol:
            N2 = _choose_terms(S, g1, right, fine)
            if N2 is not None and N2 <= 4 * N + 50:
                N, val = N2, _total(_terms(S, x, N2))
        return SeriesValue(val, N + 1, _tail_after(S, g1, right, N), True)
    if S.growth_cert is not None and not right and S.growth_cert * abs(g1) >= 1:
        raise NotCertified(
            f"x = {x!r} is left of the centre with M|g_1(x)| = {S.growth_cert * abs(g1):.6g} >= 1")
    if S.growth_cert is not None:
        raise NotCertified(f"{P} stored terms cannot certify tolerance {abs_tol:g} at x = {x!r}")
    # no certificate: accept the truncation only if the stored terms die out
    terms = _terms(S, x, max(P - 1, 0))
    small = abs_tol / 10
    if P >= 3 and np.all(np.abs(terms[-3:]) < small):
        return SeriesValue(_total(terms), P, INF, False)
    raise DivergenceDetected(
        f"trailing terms at x = {x!r} do not fall below {small:g} and no certificate exists")


def _total(terms):
    if np.iscomplexobj(terms):
        return complex(math.fsum(terms.real), math.fsum(terms.imag))
    return math.fsum(terms)


def eval_series(S: GSeries, x: float, abs_tol: float = 1e-10, heuristic: bool = False):
    """Value of the series at x, certified to abs_tol when possible."""
    return eval_series_detailed(S, x, abs_tol, heuristic).value


def series_function(S: GSeries, abs_tol: float = 1e-12) -> Callable[[float], Any]:
    return lambda x: eval_series(S, x, abs_tol)


# ---------------------------------------------------------------- term-wise operations
def _plain(v):
    return complex(v) if isinstance(v, complex) or np.iscomplexobj(v) else float(v)


def integrate_series(S: GSeries) -> GSeries:
    """The series of x -> integral of f over [x0, x): b_0 = 0, b_{n+1} = a_n / (n+1)."""
    a = list(S.coeffs)
    tail = S.tail
    if tail.kind is TailKind.EXP and tail.lam == 0:
        # the tail is scale * 0^n / n!, non-zero only at n = 0
        if not a:
            a = [tail.scale]
        tail = ZERO_TAIL
    b = [0.0] + [v / (n + 1) for n, v in enumerate(a)]
    if tail.kind is TailKind.EXP:
        tail = TailRule(TailKind.EXP, tail.lam, tail.scale / tail.lam)
    return replace(S, coeffs=tuple(b), tail=tail, validity=None)


def differentiate_series(S: GSeries, k: int = 1, c1: Optional[float] = None,
                         c2: Optional[float] = None) -> GSeries:
    """Term-wise k-th g-derivative: c_n = a_{n+k} (n+k)! / n!.

    When a convergence interval [c1, c2] around the centre is supplied, the
    result carries the interval (t1, t2) on which the differentiated series
    is known to converge.
    """
    if int(k) != k or k < 0:
        raise ValidationError("derivative order must be a non-negative integer")
    k = int(k)
    if k == 0:
        return S
    P = S.prefix_length
    n = np.arange(max(P - k, 0))
    if P and P - 1 <= 170:
        # exact integer ratios while they fit
        c = np.array([S._a[i + k] * float(math.perm(i + k, k)) for i in n], dtype=S._a.dtype)
    else:
        c = _times_exp(S._a[k:], _lfact(n + k) - _lfact(n)) if len(n) else S._a[:0]
    tail = S.tail
    if tail.kind is TailKind.EXP:
        tail = TailRule(TailKind.EXP, tail.lam, tail.scale * tail.lam ** k)
    M = S.growth_cert
    validity = S.validity
    if c1 is not None and c2 is not None:
        validity = derivative_validity(S.g, S.center, c1, c2)
    # |c_n| n! = |a_{n+k}| (n+k)! <= A M^k * M^(n+1): same M, amplitude times M^k
    keep = M is not None and tail.kind is not TailKind.EXP
    return replace(S, coeffs=tuple(_plain(v) for v in c), tail=tail,
                   growth_cert=M if keep else None,
                   cert_amplitude=S.cert_amplitude * M ** k if keep else 1.0,
                   validity=validity)


def derivative_validity(g: Derivator, x0: float, c1: float, c2: float) -> tuple[float, float]:
    """(t1, t2) with t2 = sup{x: g^C(x) < g^C(c2)} and t1 = inf{x: g(c1) < g(x)}."""
    if not c1 < x0 < c2:
        raise ValidationError("need c1 < x0 < c2")
    t2 = c2
    # walk left across flat stretches of the continuous part
    while t2 > -INF and g.slope_left(t2) == 0 and g.segments:
        i = bisect.bisect_left([sg.lo for sg in g.segments], t2) - 1
        t2 = g.segments[i].lo
    t1 = c1
    if g.delta(c1) == 0 and g.slope_right(c1) == 0 and not g._accumulates_right(c1):
        t1 = g._constancy_end(c1)
    return float(t1), float(t2)


def _exp_value(g: Derivator, x0: float, lam, s: float):
    """exp_g(lam; x0)(s) in closed form (lazy import avoids a cycle)."""
    from .exponential import exp_extended
    return exp_extended(g, x0, lam, s)


def _inner_sums(a: np.ndarray, gam: np.ndarray, K: int) -> list:
    """a'_k = sum_j a_{k+j} (k+j)!/k! * gam_j for k < K, with P = len(a)."""
    P = len(a)
    out = []
    for k in range(K):
        j = np.arange(P - k)
        with np.errstate(divide="ignore"):
            logw = _lfact(j + k) - _lfact(k) + np.log(np.abs(gam[: P - k]))
        v = _times_exp(a[k:] * np.sign(gam[: P - k]), logw)
        out.append(_plain(_total(v)))
    return out


def recenter_series(S: GSeries, s: float, abs_tol: float = 1e-10) -> GSeries:
    """The same function expanded around s.

    New coefficients a'_k = (1/k!) sum_{n>=k} a_n n!/(n-k)! g_{x0,n-k}(s).
    A zero tail gives a finite computation; an exponential tail is carried
    over in closed form; an open tail needs the growth certificate and keeps
    only coefficients whose truncated inner sum is certified to abs_tol.
    """
    s = float(s)
    S.g._check(s)
    if s == S.center:
        return S
    P = S.prefix_length
    right = s >= S.center
    g1 = S.g.value(s) - S.g.value(S.center)
    kind = S.tail.kind
    gam = normalized_monomials(S.g, S.center, max(P - 1, 0), s)
    if kind is TailKind.ZERO:
        new = _inner_sums(S._a, gam, P)
        return replace(S, center=s, coeffs=tuple(new), validity=None, growth_cert=None)
    if kind is TailKind.EXP:
        lam, scale = S.tail.lam, S.tail.scale
        a = S._a.astype(complex) if isinstance(lam * scale, complex) else S._a.copy()
        if P:
            n = np.arange(P)
            a = a - scale * np.array([lam ** int(i) / factorial(int(i)) for i in n])
        new_scale = scale * _exp_value(S.g, S.center, lam, s)
        finite = _inner_sums(a, gam, P)
        new = [_plain(v + new_scale * lam ** k / factorial(k)) for k, v in enumerate(finite)]
        tail = TailRule(TailKind.EXP, lam, new_scale)
        return replace(S, center=s, coeffs=tuple(new), tail=tail, growth_cert=None, validity=None)
    M = S.growth_cert
    if M is None:
        raise NotCertified("recentering an open-tailed series needs a growth certificate")
    z = M * abs(g1)
    if not right and z >= 1:
        raise NotCertified(f"M|g_1(s)| = {z:.6g} >= 1 to the left of the centre")
    # |a'_k - stored part| <= A M^(k+1)/k! * (tail of sum_j (M|g_1(s)|)^j / j!  or  geometric)
    A = S.cert_amplitude
    K = 0
    for k in range(P):
        m = P - k - 1
        err = A * math.exp((k + 1) * math.log(M) - math.lgamma(k + 1)) * (
            _poisson_tail(z, m) if right else _geometric_tail(z, m))
        if err > abs_tol:
            break
        K = k + 1
    if K == 0:
        raise NotCertified(f"the stored prefix cannot certify the recentred coefficients to {abs_tol:g}")
    new = _inner_sums(S._a, gam, K)
    A_new = A * (math.exp(z) if right else 1.0 / (1.0 - z))
    return replace(S, center=s, coeffs=tuple(new), tail=OPEN_TAIL, growth_cert=M,
                   cert_amplitude=A_new, validity=None)


# ---------------------------------------------------------------- coefficient recovery
def identifiable(g: Derivator, t: float) -> bool:
    """Whether g^C increases somewhere to the right of t inside the window."""
    hi = g.window[1]
    return g.continuous(hi) > g.continuous(t)


def coefficients_from_derivatives(S: GSeries, t: Optional[float] = None, n_max: int = 3,
                                  abs_tol: float = 1e-12) -> list:
    """f^{(n)}_g(t) / n! for n = 0..n_max by repeated numerical g-differentiation.

    Orders n >= 2 are refused (NotIdentifiable) when g^C is constant on
    [t, window end]: then high monomials vanish on a whole right
    neighbourhood and the coefficients are not determined by f.
    """
    t = S.center if t is None else float(t)
    if t != S.center:
        raise ValidationError("coefficients are recovered at the series centre only")
    if n_max >= 2 and not identifiable(S.g, t):
        raise NotIdentifiable(
            f"g^C is constant to the right of {t!r}: coefficients of order >= 2 are not unique")
    def f(x):
        return eval_series(S, x, abs_tol)

    return [g_derivative_n(S.g, f, t, n) / factorial(n) for n in range(n_max + 1)]


# ---------------------------------------------------------------- growth bound from a left jump
def left_growth_bound(S: GSeries, c: float, eps: float = 0.1) -> float:
    """M with |a_n| <= M^(n+1)/n!, built from absolute convergence at a left jump c.

    Follows the root-test construction: find m with (|a_n| n!)^(1/n) <=
    (1 + eps)/Delta g(c) for all stored n >= m, then take the maximum of 1,
    that ratio (if anything non-zero lies beyond m) and |a_n| n! for n < m.
    """
    c = float(c)
    if not c < S.center:
        raise ValidationError("c must lie to the left of the centre")
    d = S.g.delta(c)
    if d <= 0:
        raise ValidationError(f"{c!r} is not a jump point")
    rate = (1.0 + eps) / d
    lb = S.log_scaled()
    P = len(lb)
    ok = [n == 0 or lb[n] / n <= math.log(rate) for n in range(P)]
    m = P
    while m > 0 and ok[m - 1]:
        m -= 1
    tail = S.tail
    if tail.kind is TailKind.EXP and tail.scale != 0 and abs(tail.lam) > rate:
        raise BoundViolated(
            f"exponential tail rate |lam| = {abs(tail.lam):.6g} exceeds (1+eps)/Delta g(c) = {rate:.6g}: "
            "the series cannot converge absolutely at c")
    if tail.kind is TailKind.OPEN and m > P - 3:
        raise BoundViolated(
            "stored coefficients do not settle under the root-test rate (1+eps)/Delta g(c); "
            "absolute convergence at c is inconsistent with them")
    beyond = bool(np.any(lb[m:] > -INF)) or (tail.kind is TailKind.EXP and tail.scale != 0) \
        or tail.kind is TailKind.OPEN
    M = max([1.0, rate if beyond else 0.0, *[math.exp(v) for v in lb[:m]]])
    bad = S.cert_violation(M)
    if bad is not None:
        raise BoundViolated(f"|a_{bad}| exceeds M^(n+1)/n! with M = {M!r}")
    return M


# ---------------------------------------------------------------- JSON literal
def _num_out(v):
    if isinstance(v, complex) or np.iscomplexobj(v):
        v = complex(v)
        if v.imag == 0:
            return v.real
        return {"re": v.real, "im": v.imag}
    return float(v)


def _num_in(v):
    if isinstance(v, dict):
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return float(v)
    raise ValidationError(f"not a number: {v!r}")


def to_literal(S: GSeries) -> dict:
    out: dict[str, Any] = {"center": S.center, "coeffs": [_num_out(v) for v in S.coeffs],
                           "tail": {"kind": S.tail.kind.value}}
    if S.tail.kind is TailKind.EXP:
        out["tail"]["lambda"] = _num_out(S.tail.lam)
        out["tail"]["scale"] = _num_out(S.tail.scale)
    if S.growth_cert is not None:
        out["growth_cert"] = S.growth_cert
        if S.cert_amplitude != 1.0:
            out["cert_amplitude"] = S.cert_amplitude
    return out


def from_literal(g: Derivator, lit: dict) -> GSeries:
    if not isinstance(lit, dict) or "center" not in lit:
        raise ValidationError("series literal needs a 'center'")
    coeffs = tuple(_num_in(v) for v in lit.get("coeffs", []))
    t = lit.get("tail") or {"kind": "none"}
    if isinstance(t, str):
        t = {"kind": t}
    if not isinstance(t, dict):
        raise ValidationError("tail must be an object or a kind name")
    try:
        kind = TailKind(t.get("kind", "none"))
    except ValueError:
        raise ValidationError(f"unknown tail kind {t.get('kind')!r}") from None
    tail = TailRule(kind)
    if kind is TailKind.EXP:
        tail = TailRule(kind, _num_in(t.get("lambda", 0.0)), _num_in(t.get("scale", 1.0)))
    cert = lit.get("growth_cert")
    return GSeries(g, float(lit["center"]), coeffs, tail, None if cert is None else float(cert),
                   float(lit.get("cert_amplitude", 1.0)))


def loads(g: Derivator, text: str) -> GSeries:
    try:
        return from_literal(g, json.loads(text))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"series literal is not valid JSON: {exc}") from None


def dumps(S: GSeries) -> str:
    return json.dumps(to_literal(S))


def exp_series_object(g: Derivator, x0: float, lam, scale=1.0) -> GSeries:
    """sum_n scale * lam^n g_n / n! as a GSeries with an empty prefix."""
    return GSeries(g, x0, (), TailRule(TailKind.EXP, lam, scale))
