"""Derivators: left-continuous, non-decreasing functions g on the real line.

A :class:`Derivator` is built from three pieces:

* a continuous part given by contiguous affine segments (outside the segments
  it is extended with slope one),
* a finite list of explicit jumps ``(x_j, size_j)``,
* at most one geometric jump generator, i.e. countably many jumps
  accumulating at a point.

Evaluation uses the normalisation ``g = g^C + g^B`` where the jump part
``g^B`` vanishes at the origin, and every value is the left limit at a jump.
"""
from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import GeneratorUnbounded, OutOfWindow, ValidationError

INF = math.inf

# relative slack used when checking that adjacent segments join continuously
_JOIN_RTOL = 1e-12


@dataclass(frozen=True)
class Segment:
    """Affine piece ``slope * x + intercept`` of the continuous part on [lo, hi]."""

    lo: float
    hi: float
    slope: float
    intercept: float
    kind: str = "affine"

    def value(self, x: float) -> float:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class GeometricGenerator:
    """Jumps of size ``first_size * ratio**(k-1)``, k = 1, 2, ...

    The k-th jump sits at distance equal to its own size from the
    accumulation point, on the requested side.  With ``first_size = 1/2``,
    ``ratio = 1/2`` and ``side = "left"`` this gives jumps 2^-k at -2^-k.
    """

    accumulation: float
    side: str
    first_size: float
    ratio: float
    rule: str = "geometric"

    def __post_init__(self):
        if self.rule != "geometric":
            raise ValidationError(f"unknown generator rule {self.rule!r}")
        if self.side not in ("left", "right"):
            raise ValidationError("generator side must be 'left' or 'right'")
        if not (self.first_size > 0 and math.isfinite(self.first_size)):
            raise ValidationError("generator first_size must be positive")
        if not math.isfinite(self.accumulation):
            raise ValidationError("generator accumulation must be finite")
        if not (0.0 < self.ratio < 1.0):
            # a ratio >= 1 has infinite mass near the accumulation point
            raise GeneratorUnbounded(
                f"geometric ratio {self.ratio!r} does not give a summable jump mass")

    def size(self, k: int) -> float:
        return self.first_size * self.ratio ** (k - 1)

    def location(self, k: int) -> float:
        d = self.size(k)
        return self.accumulation - d if self.side == "left" else self.accumulation + d

    def mass(self, k1: int, k2: float = INF) -> float:
        """Total size of jumps k1..k2 (inclusive, k2 may be infinite)."""
        if k2 < k1:
            return 0.0
        head = self.size(k1)
        if k2 == INF:
            return head / (1.0 - self.ratio)
        return head * (1.0 - self.ratio ** (k2 - k1 + 1)) / (1.0 - self.ratio)

    def total_mass(self) -> float:
        return self.mass(1)

    def _estimate(self, dist: float) -> int:
        # smallest k with size(k) <= dist, up to rounding
        if dist >= self.first_size:
            return 1
        if dist <= 0:
            return 1 << 30
        return 1 + int(math.ceil(math.log(dist / self.first_size) / math.log(self.ratio)))

    def count_at_least(self, threshold: float) -> int:
        """Number of generator jumps with size >= threshold."""
        if threshold <= 0:
            raise GeneratorUnbounded("infinitely many generator jumps above a zero threshold")
        if self.first_size < threshold:
            return 0
        k = max(1, self._estimate(threshold) - 1)
        while self.size(k) >= threshold:
            k += 1
        while k > 1 and self.size(k - 1) < threshold:
            k -= 1
        return k - 1

    def index_range(self, u: float, v: float) -> Optional[tuple[int, float]]:
        """Indices k whose location lies in [u, v); None if empty.

        The upper index is ``INF`` when the interval reaches the
        accumulation point from the side the jumps live on.
        """
        if not u < v:
            return None
        p = self.accumulation
        if self.side == "left":
            # locations increase towards p
            if u >= p:
                return None
            k1 = _first_true(lambda k: self.location(k) >= u, self._estimate(p - u))
            if v >= p:
                return k1, INF
            if self.location(k1) >= v:
                return None
            # last k with location < v
            k2 = _first_true(lambda k: self.location(k) >= v, self._estimate(p - v)) - 1
            return (k1, k2) if k2 >= k1 else None
        # right side: locations decrease towards p
        if v <= p:
            return None
        k1 = _first_true(lambda k: self.location(k) < v, self._estimate(v - p))
        if u <= p:
            return k1, INF
        if self.location(k1) < u:
            return None
        k2 = _first_true(lambda k: self.location(k) < u, self._estimate(u - p)) - 1
        return (k1, k2) if k2 >= k1 else None


def _first_true(pred, k0: int) -> int:
    """First k >= 1 where a monotone (False then True) predicate holds."""
    k = max(1, min(k0, 1 << 30))
    if pred(k):
        # gallop downwards to a False (or to 1)
        step = 1
        lo = k
        while lo > 1 and pred(max(1, k - step)):
            lo = max(1, k - step)
            if lo == 1:
                return 1
            step *= 2
        if lo == 1 and pred(1):
            return 1
        hi, lo = lo, max(1, k - step)
        if pred(lo):
            return lo
    else:
        step = 1
        while not pred(k + step):
            k += step
            step *= 2
        lo, hi = k, k + step
    # pred(lo) False, pred(hi) True
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


class PointTag(Enum):
    JUMP = "Jump"
    CONSTANT_INTERIOR = "ConstantInterior"
    LEFT_ENDPOINT = "LeftEndpoint"
    RIGHT_ENDPOINT = "RightEndpoint"
    REGULAR = "Regular"


@dataclass(frozen=True)
class PointClass:
    """Classification of a point: D_g, C_g (with its right end b_n), N_g^-, N_g^+ or none."""

    tag: PointTag
    component_end: Optional[float] = None

    def __str__(self) -> str:
        if self.tag is PointTag.CONSTANT_INTERIOR:
            return f"{self.tag.value}(b={self.component_end!r})"
        return self.tag.value


class JumpSet(NamedTuple):
    locations: np.ndarray
    sizes: np.ndarray
    neglected_mass: float


class Truncation(NamedTuple):
    derivator: "Derivator"
    discarded_mass: float


class Derivator:
    """Immutable piecewise description of a derivator g."""

    def __init__(self, segments: Sequence[Segment] = (), jumps: Iterable[tuple[float, float]] = (),
                 generator: Optional[GeometricGenerator] = None,
                 window: tuple[float, float] = (-10.0, 10.0)):
        lo, hi = (float(window[0]), float(window[1]))
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ValidationError(f"window must be a finite interval with lo < hi, got {window!r}")
        self.window = (lo, hi)
        self.segments = tuple(segments)
        self._check_segments()
        self._seg_los = [s.lo for s in self.segments]

        pairs = sorted((float(x), float(d)) for x, d in jumps)
        for x, d in pairs:
            if not math.isfinite(x):
                raise ValidationError("jump locations must be finite")
            if not (d > 0 and math.isfinite(d)):
                raise ValidationError(f"jump at {x!r} has non-positive size {d!r}")
        for (x1, _), (x2, _) in zip(pairs, pairs[1:]):
            if x1 == x2:
                raise ValidationError(f"duplicate jump location {x1!r}")
        self.jumps = tuple(pairs)
        self._jx = [x for x, _ in pairs]
        self._jcum = [0.0]
        for _, d in pairs:
            self._jcum.append(self._jcum[-1] + d)

        self.generator = generator
        if generator is not None:
            for x in self._jx:
                r = generator.index_range(x, math.nextafter(x, INF))
                if r is not None:
                    raise ValidationError(f"explicit jump at {x!r} collides with a generator jump")

    # ------------------------------------------------------------------ setup
    def _check_segments(self):
        segs = self.segments
        for s in segs:
            if not s.lo < s.hi:
                raise ValidationError(f"segment [{s.lo!r}, {s.hi!r}] is empty")
            if s.slope < 0 or not math.isfinite(s.slope):
                raise ValidationError(f"segment slope {s.slope!r} makes g decreasing")
            if not math.isfinite(s.intercept):
                raise ValidationError("segment intercept must be finite")
        for a, b in zip(segs, segs[1:]):
            if a.hi != b.lo:
                raise ValidationError(
                    f"segments must be contiguous: [.., {a.hi!r}] then [{b.lo!r}, ..]")
            va, vb = a.value(a.hi), b.value(b.lo)
            if abs(va - vb) > _JOIN_RTOL * (1.0 + abs(va)):
                raise ValidationError(
                    f"continuous part is discontinuous at {a.hi!r}; put jumps in 'jumps' "
                    "(the value of g at a jump point is the left limit and cannot be set)")

    # ------------------------------------------------------------------ basics
    @property
    def span(self) -> float:
        return self.window[1] - self.window[0]

    def _check(self, x: float):
        if not (self.window[0] <= x <= self.window[1]):
            raise OutOfWindow(f"x = {x!r} outside window [{self.window[0]!r}, {self.window[1]!r}]")

    def has_jumps(self) -> bool:
        return bool(self.jumps) or self.generator is not None

    def continuous_is_constant(self) -> bool:
        """True when g^C is constant (all slopes zero, no slope-one extension)."""
        if not self.segments:
            return True
        if self.segments[0].lo != -INF or self.segments[-1].hi != INF:
            return False
        return all(s.slope == 0 for s in self.segments)

    def continuous(self, x: float) -> float:
        """Continuous part g^C(x) (no window check)."""
        segs = self.segments
        if not segs:
            return 0.0
        first, last = segs[0], segs[-1]
        if x < first.lo:
            return first.value(first.lo) + (x - first.lo)
        if x > last.hi:
            return last.value(last.hi) + (x - last.hi)
        i = bisect.bisect_right(self._seg_los, x) - 1
        return segs[max(i, 0)].value(x)

    def slope_right(self, x: float) -> float:
        """Slope of g^C on (x, x + eps)."""
        segs = self.segments
        if not segs:
            return 0.0
        if x < segs[0].lo or x >= segs[-1].hi:
            return 1.0
        i = bisect.bisect_right(self._seg_los, x) - 1
        return segs[i].slope

    def slope_left(self, x: float) -> float:
        """Slope of g^C on (x - eps, x)."""
        segs = self.segments
        if not segs:
            return 0.0
        if x <= segs[0].lo or x > segs[-1].hi:
            return 1.0
        i = bisect.bisect_left(self._seg_los, x) - 1
        return segs[i].slope

    def breakpoints(self, a: float, b: float) -> list[float]:
        """Segment boundaries strictly inside (a, b)."""
        pts = set()
        for s in self.segments:
            for t in (s.lo, s.hi):
                if a < t < b:
                    pts.add(t)
        return sorted(pts)

    # ------------------------------------------------------------------ jumps
    def _explicit_mass(self, u: float, v: float) -> float:
        i = bisect.bisect_left(self._jx, u)
        j = bisect.bisect_left(self._jx, v)
        return self._jcum[j] - self._jcum[i] if j > i else 0.0

    def jump_mass(self, u: float, v: float) -> float:
        """Total jump size over [u, v) (no window check)."""
        if not u < v:
            return 0.0
        m = self._explicit_mass(u, v)
        if self.generator is not None:
            r = self.generator.index_range(u, v)
            if r is not None:
                m += self.generator.mass(*r)
        return m

    def jumps_in(self, u: float, v: float, min_size: float = 0.0,
                 mass_tol: Optional[float] = None) -> JumpSet:
        """Jumps located in [u, v), sorted by location.

        Explicit jumps are always returned (if ``size >= min_size``).  Generator
        jumps are materialised down to ``min_size`` and, when ``mass_tol`` is
        given, further until the neglected generator mass is at most
        ``mass_tol``.  ``neglected_mass`` reports what was left out.
        """
        locs: list[float] = []
        sizes: list[float] = []
        neglected = 0.0
        i = bisect.bisect_left(self._jx, u)
        j = bisect.bisect_left(self._jx, v)
        for x, d in self.jumps[i:j]:
            if d >= min_size:
                locs.append(x)
                sizes.append(d)
            else:
                neglected += d
        gen = self.generator
        if gen is not None and u < v:
            r = gen.index_range(u, v)
            if r is not None:
                k1, k2 = r
                if min_size > 0:
                    kmax = gen.count_at_least(min_size)
                else:
                    kmax = k2
                if mass_tol is not None:
                    # keep adding jumps until the remainder is small enough
                    kk = k1
                    while gen.mass(kk, k2) > mass_tol and kk <= k2:
                        kk += 1
                    kmax = max(kmax, kk - 1) if min_size > 0 else min(kmax, kk - 1)
                if kmax == INF:
                    raise GeneratorUnbounded("cannot materialise infinitely many jumps")
                kmax = int(min(kmax, k2))
                for k in range(k1, kmax + 1):
                    locs.append(gen.location(k))
                    sizes.append(gen.size(k))
                neglected += gen.mass(max(k1, kmax + 1), k2)
        order = np.argsort(locs, kind="stable")
        return JumpSet(np.asarray(locs, float)[order], np.asarray(sizes, float)[order], neglected)

    def next_jump_right(self, x: float) -> float:
        """Infimum of jump locations > x (the accumulation point counts); INF if none."""
        best = INF
        i = bisect.bisect_right(self._jx, x)
        if i < len(self._jx):
            best = self._jx[i]
        gen = self.generator
        if gen is not None:
            p = gen.accumulation
            if gen.side == "left" and x < p:
                k = _first_true(lambda k: gen.location(k) > x, gen._estimate(p - x))
                best = min(best, gen.location(k))
            elif gen.side == "right":
                if x <= p:
                    best = min(best, p)
                else:
                    # locations decrease in k: the closest one above x is the last k with loc > x
                    if gen.location(1) > x:
                        k = _first_true(lambda k: gen.location(k) <= x, gen._estimate(x - p)) - 1
                        best = min(best, gen.location(k))
        return best

    def next_jump_left(self, x: float) -> float:
        """Supremum of jump locations < x (the accumulation point counts); -INF if none."""
        best = -INF
        i = bisect.bisect_left(self._jx, x)
        if i > 0:
            best = self._jx[i - 1]
        gen = self.generator
        if gen is not None:
            p = gen.accumulation
            if gen.side == "right" and x > p:
                k = _first_true(lambda k: gen.location(k) < x, gen._estimate(x - p))
                best = max(best, gen.location(k))
            elif gen.side == "left":
                if x >= p:
                    best = max(best, p)
                elif gen.location(1) < x:
                    k = _first_true(lambda k: gen.location(k) >= x, gen._estimate(p - x)) - 1
                    best = max(best, gen.location(k))
        return best

    def _accumulates_right(self, x: float) -> bool:
        g = self.generator
        return g is not None and g.side == "right" and x == g.accumulation

    def _accumulates_left(self, x: float) -> bool:
        g = self.generator
        return g is not None and g.side == "left" and x == g.accumulation

    def _jump_at(self, x: float) -> float:
        i = bisect.bisect_left(self._jx, x)
        if i < len(self._jx) and self._jx[i] == x:
            return self.jumps[i][1]
        gen = self.generator
        if gen is not None:
            r = gen.index_range(x, math.nextafter(x, INF))
            if r is not None and r[1] != INF:
                return gen.size(r[0])
        return 0.0

    # ------------------------------------------------------------------ queries
    def jump_part(self, x: float) -> float:
        """g^B(x), normalised so that g^B(0) = 0."""
        if x > 0:
            return self.jump_mass(0.0, x)
        return -self.jump_mass(x, 0.0)

    def value(self, x: float) -> float:
        """g(x) without the window check."""
        return self.continuous(x) + self.jump_part(x)

    def eval(self, x: float) -> float:
        x = float(x)
        self._check(x)
        return self.value(x)

    __call__ = eval

    def evaluate(self, xs) -> np.ndarray:
        return np.array([self.eval(float(x)) for x in np.ravel(xs)]).reshape(np.shape(xs))

    def delta(self, x: float) -> float:
        x = float(x)
        self._check(x)
        return self._jump_at(x)

    def classify(self, x: float) -> PointClass:
        x = float(x)
        self._check(x)
        if self._jump_at(x) > 0:
            return PointClass(PointTag.JUMP)
        right_const = (self.slope_right(x) == 0 and not self._accumulates_right(x))
        left_const = (self.slope_left(x) == 0 and not self._accumulates_left(x))
        if right_const and left_const:
            return PointClass(PointTag.CONSTANT_INTERIOR, self._constancy_end(x))
        if right_const:
            return PointClass(PointTag.LEFT_ENDPOINT)
        if left_const:
            return PointClass(PointTag.RIGHT_ENDPOINT)
        return PointClass(PointTag.REGULAR)

    def _constancy_end(self, x: float) -> float:
        """Right end b of the constancy component containing x (may be INF)."""
        end = INF
        segs = self.segments
        if segs:
            if x < segs[0].lo:
                end = x  # slope-one extension, not constant (unreachable in practice)
            else:
                i = bisect.bisect_right(self._seg_los, x) - 1
                while i < len(segs) and segs[i].slope == 0:
                    i += 1
                end = segs[i - 1].hi if i > 0 else x
        return min(end, self.next_jump_right(x))

    def structural_points(self, a: float, b: float) -> list[float]:
        """Segment breakpoints and explicit jump locations strictly inside (a, b)."""
        pts = set(self.breakpoints(a, b))
        i = bisect.bisect_right(self._jx, a)
        j = bisect.bisect_left(self._jx, b)
        pts.update(self._jx[i:j])
        return sorted(pts)

    def distance_right(self, x: float) -> float:
        """Distance from x to the next jump or breakpoint on the right."""
        nb = INF
        for s in self.segments:
            for t in (s.lo, s.hi):
                if t > x:
                    nb = min(nb, t)
        return min(nb, self.next_jump_right(x)) - x

    def distance_left(self, x: float) -> float:
        nb = -INF
        for s in self.segments:
            for t in (s.lo, s.hi):
                if t < x:
                    nb = max(nb, t)
        return x - max(nb, self.next_jump_left(x))

    # ------------------------------------------------------------------ derived
    def split(self) -> tuple["Derivator", "Derivator"]:
        gc = Derivator(self.segments, (), None, self.window)
        gb = Derivator((), self.jumps, self.generator, self.window)
        return gc, gb

    def truncate_jumps(self, m: int) -> Truncation:
        return truncate_jumps(self, m)

    def with_window(self, window) -> "Derivator":
        return Derivator(self.segments, self.jumps, self.generator, window)

    # ------------------------------------------------------------------ config
    def to_config(self) -> dict[str, Any]:
        cont = []
        for s in self.segments:
            d: dict[str, Any] = {}
            if s.lo != -INF:
                d["from"] = s.lo
            if s.hi != INF:
                d["to"] = s.hi
            d["kind"] = s.kind
            if s.kind == "affine":
                d["slope"] = s.slope
                d["intercept"] = s.intercept
            cont.append(d)
        cfg: dict[str, Any] = {
            "continuous": cont,
            "jumps": [{"x": x, "size": d} for x, d in self.jumps],
        }
        if self.generator is not None:
            gen = self.generator
            cfg["generator"] = {"accumulation": gen.accumulation, "side": gen.side,
                                "rule": gen.rule, "first_size": gen.first_size,
                                "ratio": gen.ratio}
        cfg["window"] = [self.window[0], self.window[1]]
        return cfg

    def __eq__(self, other):
        if not isinstance(other, Derivator):
            return NotImplemented
        return (self.segments == other.segments and self.jumps == other.jumps
                and self.generator == other.generator and self.window == other.window)

    def __hash__(self):
        return hash((self.segments, self.jumps, self.generator, self.window))

    def __repr__(self):
        return (f"Derivator(segments={len(self.segments)}, jumps={len(self.jumps)}, "
                f"generator={'yes' if self.generator else 'no'}, window={self.window})")


def truncate_jumps(g: Derivator, m: int) -> Truncation:
    """The approximation g^m keeping only jumps of size >= 1/m.

    Returns the truncated derivator together with the jump mass discarded on
    the working window, which bounds sup |g - g^m| there.
    """
    if int(m) != m or m < 1:
        raise ValidationError("m must be a positive integer")
    thr = 1.0 / m
    lo, hi = g.window
    kept = [(x, d) for x, d in g.jumps if d >= thr]
    discarded = math.fsum(d for x, d in g.jumps if d < thr and lo <= x < hi)
    gen = g.generator
    if gen is not None:
        k = gen.count_at_least(thr)
        kept.extend((gen.location(i), gen.size(i)) for i in range(1, k + 1))
        r = gen.index_range(lo, hi)
        if r is not None:
            discarded += gen.mass(max(r[0], k + 1), r[1])
    return Truncation(Derivator(g.segments, kept, None, g.window), discarded)


# ---------------------------------------------------------------------- config io
def _num(d: dict, key: str, default=None) -> float:
    if key not in d:
        if default is not None:
            return default
        raise ValidationError(f"missing key {key!r}")
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ValidationError(f"{key!r} must be a number, got {v!r}")
    return float(v)


def from_config(cfg: dict) -> Derivator:
    """Build a derivator from its JSON-compatible description."""
    if not isinstance(cfg, dict):
        raise ValidationError("derivator config must be a JSON object")
    unknown = set(cfg) - {"continuous", "jumps", "generator", "window"}
    if unknown:
        raise ValidationError(f"unknown derivator keys: {sorted(unknown)}")
    if "window" not in cfg:
        raise ValidationError("derivator config requires a 'window'")
    win = cfg["window"]
    if not (isinstance(win, (list, tuple)) and len(win) == 2):
        raise ValidationError("window must be [lo, hi]")
    segs = []
    for raw in cfg.get("continuous", []) or []:
        if not isinstance(raw, dict):
            raise ValidationError("continuous segments must be objects")
        kind = raw.get("kind", "affine")
        lo = _num(raw, "from", -INF)
        hi = _num(raw, "to", INF)
        if kind == "identity":
            segs.append(Segment(lo, hi, 1.0, 0.0, "identity"))
        elif kind == "affine":
            segs.append(Segment(lo, hi, _num(raw, "slope"), _num(raw, "intercept"), "affine"))
        else:
            raise ValidationError(f"unknown segment kind {kind!r}")
    jumps = []
    for raw in cfg.get("jumps", []) or []:
        if not isinstance(raw, dict):
            raise ValidationError("jumps must be objects {x, size}")
        jumps.append((_num(raw, "x"), _num(raw, "size")))
    gen = None
    raw = cfg.get("generator")
    if raw is not None:
        if not isinstance(raw, dict):
            raise ValidationError("generator must be an object")
        gen = GeometricGenerator(_num(raw, "accumulation"), str(raw.get("side", "left")),
                                 _num(raw, "first_size"), _num(raw, "ratio"),
                                 str(raw.get("rule", "geometric")))
    return Derivator(segs, jumps, gen, (_num({"v": win[0]}, "v"), _num({"v": win[1]}, "v")))


def to_config(g: Derivator) -> dict:
    return g.to_config()


def loads(text: str) -> Derivator:
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return from_config(cfg)


def dumps(g: Derivator) -> str:
    return json.dumps(g.to_config(), indent=2)


def load(path) -> Derivator:
    return loads(Path(path).read_text())


def dump(g: Derivator, path) -> None:
    Path(path).write_text(dumps(g) + "\n")


# ---------------------------------------------------------------------- helpers
def identity(window=(-10.0, 10.0)) -> Derivator:
    return Derivator([Segment(-INF, INF, 1.0, 0.0, "identity")], (), None, window)


def pure_jumps(jumps, window=(-10.0, 10.0)) -> Derivator:
    """A derivator with constant (zero) continuous part."""
    return Derivator([Segment(-INF, INF, 0.0, 0.0)], jumps, None, window)


# module-level aliases matching the operation names
def eval(g: Derivator, x: float) -> float:  # noqa: A001 - mirrors the operation name
    return g.eval(x)


def delta(g: Derivator, x: float) -> float:
    return g.delta(x)


def classify(g: Derivator, x: float) -> PointClass:
    return g.classify(x)


def split(g: Derivator):
    return g.split()
