"""Seeded generators of valid complete simple drawings."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .drawing import Drawing, validate
from .geometry import Point


class RetryBudgetExceeded(RuntimeError):
    pass


FAMILIES = ("convex", "random", "polyline")


@dataclass(frozen=True)
class GenSpec:
    family: str
    N: int
    seed: int = 0
    coord_bound: int | None = None
    bends: int = 2

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.N < 3:
            raise ValueError("N must be at least 3")
        if self.coord_bound is not None and self.coord_bound < self.N * self.N:
            raise ValueError("coord_bound must be at least N**2")
        if self.bends < 0:
            raise ValueError("bends must be non-negative")

    @property
    def bound(self) -> int:
        return self.coord_bound if self.coord_bound is not None else default_coord_bound(self.N)


def default_coord_bound(N: int) -> int:
    return max(N * N, 4096)


def generate(spec: GenSpec) -> Drawing:
    if spec.family == "convex":
        return convex_position(spec.N)
    base = random_general_position(spec.N, spec.seed, spec.bound)
    if spec.family == "random":
        return base
    return perturb_to_polylines(base, spec.seed, spec.bends)


_PARABOLA_CACHE: list[int] = []  # the greedy choice is prefix-stable


def parabola_parameters(N: int) -> list[int]:
    """Smallest increasing integers ``t`` such that no three pairwise
    vertex-disjoint chords of the points ``(t, t**2)`` are concurrent.

    The chord through ``(a, a**2)`` and ``(b, b**2)`` is the line
    ``y = (a + b) x - a b``, so three chords are concurrent (or parallel)
    exactly when their points ``(a + b, a b)`` are collinear.  Chords through
    a common vertex ``v`` all lie on ``p = v s - v**2`` and never matter.
    """
    if N <= len(_PARABOLA_CACHE):
        return _PARABOLA_CACHE[:N]
    ts = list(_PARABOLA_CACHE)
    pairs = [(a, b) for k, b in enumerate(ts) for a in ts[:k]]
    ends = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    s, p = ends.sum(axis=1), ends.prod(axis=1)
    t = ts[-1] if ts else 0
    while len(ts) < N:
        t += 1
        old = np.array(ts, dtype=np.int64)
        if len(s) and any(_sees_collinear(a + t, a * t, a, s, p, ends) for a in ts):
            continue
        s, p = np.concatenate([s, old + t]), np.concatenate([p, old * t])
        ends = np.vstack([ends, np.stack([old, np.full_like(old, t)], axis=1)])
        ts.append(t)
    _PARABOLA_CACHE[:] = ts
    return ts[:N]


def _sees_collinear(s0, p0, a, s, p, ends) -> bool:
    """Do two old chords avoiding vertex ``a`` lie on one line through ``(s0, p0)``?"""
    keep = (ends[:, 0] < a) & (a < ends[:, 1])
    ds, dp = s[keep] - s0, p[keep] - p0
    g = np.gcd(ds, dp)
    g[g == 0] = 1
    ds, dp = ds // g, dp // g
    flip = (ds < 0) | ((ds == 0) & (dp < 0))
    ds, dp = np.where(flip, -ds, ds), np.where(flip, -dp, dp)
    if len(ds) and max(int(ds.max()), int(np.abs(dp).max())) < 1 << 30:
        keys = np.sort(ds * (1 << 32) + dp)
        return bool((keys[1:] == keys[:-1]).any())
    return len(set(zip(ds.tolist(), dp.tolist()))) < len(ds)


def convex_position(N: int) -> Drawing:
    """Parabola points ``(t, t**2)`` joined by straight segments.

    ``t`` runs over :func:`parabola_parameters`, which equals ``1..N`` while
    ``N <= 8`` and skips values that would make three diagonals concurrent.
    """
    if N < 3:
        raise ValueError("N must be at least 3")
    return Drawing([(t, t * t) for t in parabola_parameters(N)])


def _collinear_with_any(pts: np.ndarray, x: int, y: int) -> bool:
    if len(pts) < 2:
        return False
    dx = pts[:, 0] - x
    dy = pts[:, 1] - y
    cr = dx[:, None] * dy[None, :] - dy[:, None] * dx[None, :]
    return bool((np.triu(cr == 0, k=1)).any())


def random_general_position(N: int, seed: int, coord_bound: int | None = None,
                            max_rounds: int = 1000) -> Drawing:
    """``N`` integer points in ``[0, coord_bound]**2``, no three collinear.

    Points are drawn one at a time and a candidate is rejected when it
    repeats a point or is collinear with two earlier ones.  If the finished
    straight-line drawing still fails validation (three concurrent edges),
    the highest-index offending vertex is redrawn.
    """
    bound = default_coord_bound(N) if coord_bound is None else coord_bound
    if bound < N * N:
        raise ValueError("coord_bound must be at least N**2")
    rng = np.random.default_rng(seed)
    pts = np.zeros((0, 2), dtype=np.int64)
    rounds = 0

    def draw_one(existing):
        nonlocal rounds
        while True:
            rounds += 1
            if rounds > max_rounds * N:
                raise RetryBudgetExceeded("could not place points in general position")
            x, y = (int(v) for v in rng.integers(0, bound + 1, size=2))
            if len(existing) and ((existing[:, 0] == x) & (existing[:, 1] == y)).any():
                continue
            if _collinear_with_any(existing, x, y):
                continue
            return x, y

    for _ in range(N):
        x, y = draw_one(pts)
        pts = np.vstack([pts, [[x, y]]])

    for _ in range(max_rounds):
        d = Drawing([(int(x), int(y)) for x, y in pts])
        report = validate(d)
        if report.ok:
            return d
        bad = max(v for viol in report.violations for arc in viol.arcs for v in arc)
        keep = np.delete(pts, bad, axis=0)
        x, y = draw_one(keep)
        pts[bad] = (x, y)
    raise RetryBudgetExceeded("validation kept failing")


def _dyadic(value: Fraction, bits: int) -> Fraction:
    return Fraction(round(value * (1 << bits)), 1 << bits)


def _angular_clearance(d: Drawing) -> np.ndarray:
    """``out[a, b]``: sine of the smallest angle at ``a`` between arc ``ab``
    and another arc at ``a`` (1 when every other arc leaves at over 90 degrees).

    Only used to size the random bends; validity is always checked exactly.
    """
    xy = np.array([[float(p.x), float(p.y)] for p in d.points])
    vec = xy[None, :, :] - xy[:, None, :]
    length = np.hypot(vec[..., 0], vec[..., 1])
    length[length == 0] = 1.0
    unit = vec / length[..., None]
    cr = np.abs(unit[:, :, None, 0] * unit[:, None, :, 1] - unit[:, :, None, 1] * unit[:, None, :, 0])
    dot = np.einsum("abk,ack->abc", unit, unit)
    sep = np.where(dot > 0, cr, 1.0)
    idx = np.arange(d.N)
    sep[:, idx, idx] = 1.0
    sep[idx, idx, :] = 1.0
    sep[idx, :, idx] = 1.0
    return sep.min(axis=2)


def perturb_to_polylines(d: Drawing, seed: int, bends: int = 2,
                         amplitude: Fraction | None = None, max_rounds: int = 60) -> Drawing:
    """Bend every straight arc at ``bends`` interior joints.

    Joints sit near evenly spaced points of the segment, displaced by random
    dyadic offsets of size up to ``amplitude``.  By default that is the
    coordinate span over ``4 N``, further limited per arc by how close its
    neighbours at either endpoint are in angle; an explicit amplitude is used
    as given.  Arcs named in a failed validation are
    redrawn with an eighth of their amplitude until the drawing validates.
    """
    if not d.is_straight():
        raise ValueError("perturb_to_polylines expects a straight-line drawing")
    if bends == 0:
        return d
    xs = [p.x for p in d.points]
    ys = [p.y for p in d.points]
    span = max(max(xs) - min(xs), max(ys) - min(ys))
    cautious = amplitude is None
    amplitude = Fraction(span) / (4 * d.N) if cautious else Fraction(amplitude)
    rng = np.random.default_rng([seed, bends])
    # joints live on a 2**-grid lattice small enough that the exact integer
    # frame of the whole drawing still fits the fast int64 path
    grid = max(0, 26 - (int(span) + 1).bit_length())
    draws = 1 << 10

    def bend(pair, amp):
        p, q = d.points[pair[0]], d.points[pair[1]]
        if amp * (1 << grid) < 1:
            return [p, q]
        pts = [p]
        for k in range(1, bends + 1):
            t = Fraction(k, bends + 1)
            ox, oy = (int(v) for v in rng.integers(-draws, draws + 1, size=2))
            pts.append(Point(_dyadic(p.x + t * (q.x - p.x) + amp * ox / draws, grid),
                             _dyadic(p.y + t * (q.y - p.y) + amp * oy / draws, grid)))
        pts.append(q)
        return pts

    amps = {pair: amplitude for pair in d.arc_pairs}
    if cautious:
        clearance = _angular_clearance(d)
        for a, b in d.arc_pairs:
            room = Fraction(min(clearance[a, b], clearance[b, a]) / 4).limit_denominator(1 << 16)
            length = abs(d.points[a].x - d.points[b].x) + abs(d.points[a].y - d.points[b].y)
            amps[(a, b)] = min(amplitude, room * length / (bends + 1))
    arcs = {pair: bend(pair, amps[pair]) for pair in d.arc_pairs}
    for _ in range(max_rounds):
        try:
            cand = Drawing(d.points, d.ids, {(d.ids[a], d.ids[b]): line for (a, b), line in arcs.items()})
        except ValueError:
            cand = None
        if cand is not None:
            report = validate(cand)
            if report.ok:
                return cand
            culprits = sorted({arc for v in report.violations for arc in v.arcs})
        else:
            culprits = sorted(pair for pair, pts in arcs.items() if len(set(pts)) != len(pts))
        for pair in culprits:
            amps[pair] /= 8
            arcs[pair] = bend(pair, amps[pair])
    raise RetryBudgetExceeded("perturbation did not converge")
