"""Named derivator fixtures and the seeded random derivator generator."""
from __future__ import annotations

from typing import Optional

import numpy as np

from .derivator import INF, Derivator, GeometricGenerator, Segment, identity, pure_jumps

WINDOW = (-5.0, 5.0)


def step_plus_identity(window=WINDOW) -> Derivator:
    """g(x) = x for x <= 0 and x + 1 for x > 0."""
    return Derivator([Segment(-INF, INF, 1.0, 0.0, "identity")], [(0.0, 1.0)], None, window)


def single_left_jump(h: float = 1.0, window=WINDOW) -> Derivator:
    """Constant continuous part with one jump of size h at -1."""
    return pure_jumps([(-1.0, h)], window)


def staircase(top: int = 10, window=(-5.0, 10.0)) -> Derivator:
    """g(x) = x for x <= 0 and g(x) = n on (n-1, n]: unit jumps at 0, 1, 2, ..."""
    segs = [Segment(-INF, 0.0, 1.0, 0.0), Segment(0.0, INF, 0.0, 0.0)]
    return Derivator(segs, [(float(k), 1.0) for k in range(0, top + 1)], None, window)


def geometric_accumulation(first_size=0.5, ratio=0.5, window=(-2.0, 2.0)) -> Derivator:
    """Jumps first_size*ratio^(k-1) accumulating at 0 from the left, g(x) = x for x > 0."""
    segs = [Segment(-INF, 0.0, 0.0, 0.0), Segment(0.0, INF, 1.0, 0.0)]
    return Derivator(segs, (), GeometricGenerator(0.0, "left", first_size, ratio), window)


def two_sided_plateaus(window=(-3.0, 3.0)) -> Derivator:
    """g = -1 on (-inf, -1], 0 on (-1, 1], 1 beyond: derivatives undefined right of 1."""
    return pure_jumps([(-1.0, 1.0), (1.0, 1.0)], window)


def two_jumps(window=WINDOW) -> Derivator:
    """Pure-jump derivator with jumps of size 1/2 at 1 and 2."""
    return pure_jumps([(1.0, 0.5), (2.0, 0.5)], window)


def mixed(window=WINDOW) -> Derivator:
    """Affine pieces including a flat stretch, plus jumps inside and at the edge of it."""
    segs = [Segment(-INF, -1.0, 1.0, 1.0), Segment(-1.0, 1.0, 0.0, 0.0),
            Segment(1.0, INF, 0.5, -0.5)]
    return Derivator(segs, [(-2.0, 0.3), (0.0, 0.4), (1.0, 0.25), (2.5, 0.6)], None, window)


FIXTURES = {
    "identity": lambda: identity(WINDOW),
    "step-plus-identity": step_plus_identity,
    "single-left-jump": single_left_jump,
    "staircase": staircase,
    "geometric": geometric_accumulation,
    "two-jumps": two_jumps,
    "mixed": mixed,
}


def random_derivator(rng: np.random.Generator, window=WINDOW, max_jumps: int = 6,
                     max_segments: int = 4, flat_probability: float = 0.3) -> Derivator:
    """A random derivator: up to 6 jumps of size in [0.1, 2] and up to 4 affine
    pieces with slopes in [0, 2], some of them flat."""
    lo, hi = window
    nseg = int(rng.integers(1, max_segments + 1))
    cuts = np.sort(rng.uniform(lo, hi, nseg - 1))
    edges = [-INF, *cuts.tolist(), INF]
    slopes = rng.uniform(0.0, 2.0, nseg)
    slopes[rng.random(nseg) < flat_probability] = 0.0
    segs = []
    value = 0.0
    anchor = edges[1] if nseg > 1 else 0.0
    # build from the first breakpoint outwards so that pieces join continuously
    first_intercept = value - slopes[0] * anchor
    segs.append(Segment(edges[0], edges[1], float(slopes[0]), float(first_intercept)))
    for i in range(1, nseg):
        x = edges[i]
        v = segs[-1].value(x)
        segs.append(Segment(x, edges[i + 1], float(slopes[i]), float(v - slopes[i] * x)))
    nj = int(rng.integers(0, max_jumps + 1))
    locs = np.sort(rng.uniform(lo, hi, nj))
    sizes = rng.uniform(0.1, 2.0, nj)
    jumps = [(float(a), float(b)) for a, b in zip(locs, sizes)]
    # an occasional jump placed exactly on a breakpoint exercises both at once
    if nseg > 1 and nj and rng.random() < 0.3:
        jumps[0] = (float(cuts[0]), jumps[0][1])
        jumps = sorted(set(jumps))
        seen = set()
        jumps = [j for j in jumps if not (j[0] in seen or seen.add(j[0]))]
    return Derivator(segs, jumps, None, window)


def random_corpus(seed: int, count: int = 20, **kw) -> list[Derivator]:
    rng = np.random.default_rng(seed)
    return [random_derivator(rng, **kw) for _ in range(count)]


def fixture(name: str) -> Optional[Derivator]:
    make = FIXTURES.get(name)
    return make() if make else None
