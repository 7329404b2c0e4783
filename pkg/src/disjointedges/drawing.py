"""Drawings of complete graphs, their validation, apex choice and labeling."""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Hashable, Iterable, Mapping

import numpy as np

from . import _kernel as K
from .geometry import (
    ClosedCurve,
    ContactKind,
    GeometryError,
    Point,
    Polyline,
    Segment,
    concat_closed,
    segment_intersection,
    signed_area,
)


class DrawingError(ValueError):
    """Structurally malformed drawing (missing arcs, wrong endpoints, ...)."""


class NoOuterVertex(DrawingError):
    pass


class AmbiguousRotation(DrawingError):
    pass


class LabelingError(DrawingError):
    pass


class NonSimpleTriangle(DrawingError):
    pass


class Drawing:
    """A complete graph drawn with polyline arcs.

    Vertices are addressed by position ``0..N-1``; ``ids`` keeps the
    caller's names.  ``arcs[(a, b)]`` with ``a < b`` runs from vertex ``a``
    to vertex ``b``.  Arcs missing from ``arcs`` default to straight
    segments.
    """

    def __init__(self, points: Iterable, ids: Iterable[Hashable] | None = None,
                 arcs: Mapping | None = None):
        self.points = tuple(Point(*p) for p in points)
        n = len(self.points)
        self.ids = tuple(range(n)) if ids is None else tuple(ids)
        if len(self.ids) != n:
            raise DrawingError("ids and points differ in length")
        if len(set(self.ids)) != n:
            raise DrawingError("duplicate vertex ids")
        if len(set(self.points)) != n:
            raise DrawingError("two vertices share a point")
        if n < 2:
            raise DrawingError("a drawing needs at least two vertices")
        self._index = {v: k for k, v in enumerate(self.ids)}

        given = {}
        for (u, v), line in (arcs or {}).items():
            a, b = self._index[u], self._index[v]
            if a == b:
                raise DrawingError(f"loop arc at {u!r}")
            line = line if isinstance(line, Polyline) else Polyline(line)
            if a > b:
                a, b, line = b, a, line.reversed()
            if (a, b) in given:
                raise DrawingError(f"arc {u!r}-{v!r} given twice")
            if line.start != self.points[a] or line.end != self.points[b]:
                raise DrawingError(f"arc {u!r}-{v!r} does not join its endpoints")
            given[(a, b)] = line
        self.arcs: dict[tuple[int, int], Polyline] = {}
        for a, b in itertools.combinations(range(n), 2):
            self.arcs[(a, b)] = given.get((a, b)) or Polyline([self.points[a], self.points[b]])
        self.arc_pairs = tuple(self.arcs)
        self._arc_index = {p: k for k, p in enumerate(self.arc_pairs)}

    @property
    def N(self) -> int:
        return len(self.points)

    def index(self, vid) -> int:
        return self._index[vid]

    def arc(self, a: int, b: int) -> Polyline:
        """The arc between vertices ``a`` and ``b``, oriented from ``a``."""
        if a < b:
            return self.arcs[(a, b)]
        return self.arcs[(b, a)].reversed()

    def arc_id(self, a: int, b: int) -> int:
        return self._arc_index[(a, b) if a < b else (b, a)]

    def is_straight(self) -> bool:
        return all(len(line) == 2 for line in self.arcs.values())

    def __eq__(self, other):
        return (isinstance(other, Drawing) and self.ids == other.ids
                and self.points == other.points and self.arcs == other.arcs)

    def __hash__(self):
        return hash((self.ids, self.points))

    # cached exact machinery, shared by validation and the set systems

    @cached_property
    def _frame(self):
        coords = list(self.points)
        for line in self.arcs.values():
            coords.extend(line.points[1:-1])
        xs, ys, scale, origin = K.integer_frame(coords)
        lookup = {p: (xs[k], ys[k]) for k, p in enumerate(coords)}
        return lookup, xs[: self.N], ys[: self.N]

    @cached_property
    def _table(self) -> K.SegmentTable:
        lookup = self._frame[0]
        return K.build_table([[lookup[p] for p in self.arcs[pair].points] for pair in self.arc_pairs])

    @cached_property
    def _point_relation(self):
        _, vx, vy = self._frame
        return K.point_segment_relation(self._table, vx, vy)

    @cached_property
    def _analysis(self) -> "_Analysis":
        return _analyze(self)


class ViolationKind(str, enum.Enum):
    SELF_INTERSECTION = "SelfIntersection"
    TANGENCY_OR_OVERLAP = "TangencyOrOverlap"
    MULTIPLE_CROSSINGS = "MultipleCrossings"
    ADJACENT_EDGES_CROSS = "AdjacentEdgesCross"
    VERTEX_ON_ARC_INTERIOR = "VertexOnArcInterior"
    TRIPLE_INTERIOR_POINT = "TripleInteriorPoint"
    JOINT_COINCIDENCE = "JointCoincidence"


@dataclass(frozen=True, order=True)
class Violation:
    kind: ViolationKind
    arcs: tuple            # vertex-index pairs of the arcs involved
    vertex: int | None = None
    point: Point | None = field(default=None, compare=False)

    def to_dict(self, d: Drawing) -> dict:
        out = {"kind": self.kind.value, "arcs": [[d.ids[a], d.ids[b]] for a, b in self.arcs]}
        if self.vertex is not None:
            out["vertex"] = d.ids[self.vertex]
        if self.point is not None:
            out["point"] = [str(self.point.x), str(self.point.y)]
        return out


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[ViolationKind]:
        return {v.kind for v in self.violations}

    def to_dict(self, d: Drawing) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict(d) for v in self.violations]}


@dataclass
class _Analysis:
    violations: list[Violation]
    cross_keys: np.ndarray     # sorted arc-pair keys a * n_arcs + b with a < b
    cross_counts: np.ndarray


def _analyze(d: Drawing) -> _Analysis:
    t = d._table
    n_arcs = len(d.arc_pairs)
    ends = np.array(d.arc_pairs, dtype=np.int64).reshape(-1, 2)
    nseg = np.diff(t.arc_start)
    c = K.pair_contacts(t)
    ai, aj = t.arc[c.i], t.arc[c.j]
    pi, pj = t.pos[c.i], t.pos[c.j]
    found: set[Violation] = set()

    segs = _segments(d)
    vertex_at = {p: k for k, p in enumerate(d.points)}

    def witness(si, sj):
        hit = segment_intersection(segs[si], segs[sj])
        return hit.point if hit is not None else None

    def classify(si, sj):
        A, B = int(t.arc[si]), int(t.arc[sj])
        pa, pb = d.arc_pairs[A], d.arc_pairs[B]
        hit = segment_intersection(segs[si], segs[sj])
        if hit is None or hit.kind is ContactKind.PROPER:
            return
        p = hit.point
        w = vertex_at.get(p)
        if w is not None and not (w in pa and w in pb):
            for pair in (pa, pb):
                if w not in pair:
                    found.add(Violation(ViolationKind.VERTEX_ON_ARC_INTERIOR, (pair,), w, p))
            return
        if w is None and (p in d.arcs[pa].joints or p in d.arcs[pb].joints):
            found.add(Violation(ViolationKind.JOINT_COINCIDENCE, tuple(sorted((pa, pb))), None, p))
            return
        found.add(Violation(ViolationKind.TANGENCY_OR_OVERLAP, tuple(sorted((pa, pb))), None, p))

    def terminal(arc_idx, pos, w):
        first = (ends[arc_idx, 0] == w) & (pos == 0)
        last = (ends[arc_idx, 1] == w) & (pos == nseg[arc_idx] - 1)
        return first | last

    same = ai == aj
    # within one arc only consecutive segments may meet, at their joint
    fine = same & (np.abs(pi - pj) == 1) & (c.code == K.SHARED)
    for k in np.nonzero(same & ~fine)[0]:
        si, sj = int(c.i[k]), int(c.j[k])
        found.add(Violation(ViolationKind.SELF_INTERSECTION, (d.arc_pairs[int(ai[k])],), None, witness(si, sj)))
    del fine

    proper = ~same & (c.code == K.PROPER)
    # contacts other than crossings are few; crossings of arcs sharing an
    # endpoint are looked up on the crossing subset only
    rest = np.flatnonzero(~same & ~proper)
    common = _common_vertex(ends, ai[rest], aj[rest])
    at_vertex = ((common >= 0) & (c.code[rest] == K.SHARED)
                 & terminal(ai[rest], pi[rest], common) & terminal(aj[rest], pj[rest], common))
    for k in rest[~at_vertex]:
        classify(int(c.i[k]), int(c.j[k]))
    del rest, common, at_vertex, same, pi, pj

    proper_idx = np.flatnonzero(proper)
    lo = np.minimum(ai[proper_idx], aj[proper_idx]).astype(np.int64)
    hi = np.maximum(ai[proper_idx], aj[proper_idx]).astype(np.int64)
    keys_all = lo * n_arcs + hi
    del lo, hi
    for k in proper_idx[_common_vertex(ends, ai[proper_idx], aj[proper_idx]) >= 0]:
        pair = tuple(sorted((d.arc_pairs[int(ai[k])], d.arc_pairs[int(aj[k])])))
        found.add(Violation(ViolationKind.ADJACENT_EDGES_CROSS, pair, None, witness(int(c.i[k]), int(c.j[k]))))
    del ai, aj

    cross_keys, first_idx, cross_counts = np.unique(keys_all, return_index=True, return_counts=True)
    del keys_all
    for key, fi in zip(cross_keys[cross_counts >= 2], first_idx[cross_counts >= 2]):
        A, B = divmod(int(key), n_arcs)
        pair = (d.arc_pairs[A], d.arc_pairs[B])
        if not (set(pair[0]) & set(pair[1])):
            k = proper_idx[fi]
            found.add(Violation(ViolationKind.MULTIPLE_CROSSINGS, pair, None, witness(int(c.i[k]), int(c.j[k]))))
    del first_idx

    _triple_points(d, c, proper_idx, segs, found)
    del c, proper, proper_idx

    _, on = d._point_relation
    seg_idx, verts = np.nonzero(on)
    for s, w in zip(seg_idx, verts):
        pair = d.arc_pairs[int(t.arc[s])]
        if int(w) not in pair:
            found.add(Violation(ViolationKind.VERTEX_ON_ARC_INTERIOR, (pair,), int(w), d.points[int(w)]))

    return _Analysis(sorted(found), cross_keys.astype(np.int64), cross_counts.astype(np.int64))


def _segments(d: Drawing) -> list[Segment]:
    out = []
    for pair in d.arc_pairs:
        out.extend(d.arcs[pair].segments())
    return out


def _common_vertex(ends, ai, aj):
    """Endpoint shared by arcs ``ai[k]`` and ``aj[k]``, or -1."""
    a0, a1, b0, b1 = ends[ai, 0], ends[ai, 1], ends[aj, 0], ends[aj, 1]
    return np.where((a0 == b0) | (a0 == b1), a0, np.where((a1 == b0) | (a1 == b1), a1, -1))


def _triple_points(d, c, idx, segs, found):
    """Three or more arcs through one crossing point.

    Along any segment, two crossings at the same exact parameter are two
    other arcs meeting it at one point.  ``idx`` lists the proper crossings
    of ``c``; entry ``q`` of the doubled list is crossing ``idx[q % P]`` seen
    from its first segment (``q < P``) or its second.
    """
    t = d._table
    P = len(idx)
    if P < 2:
        return
    sides = ((c.i, c.num_i, c.den_i), (c.j, c.num_j, c.den_j))

    def entry(q):
        seg, num, den = sides[q >= P]
        k = idx[q % P]
        return int(seg[k]), num[k], den[k]

    def other(q):
        return int(sides[q < P][0][idx[q % P]])

    if c.num_i.dtype == object:
        order = sorted(range(2 * P), key=entry)
        groups = [order]
    else:
        # sort on one int64 key (segment, hashed parameter); equal exact
        # parameters share a key, and runs of equal keys are compared exactly
        keys = np.empty(2 * P, dtype=np.int64)
        for s, (seg, num, den) in enumerate(sides):
            h = (num[idx] * np.int64(0x9E3779B1) + den[idx] * np.int64(0x85EBCA77)) & np.int64(0x7FFFFFFF)
            keys[s * P:(s + 1) * P] = (seg[idx].astype(np.int64) << 31) | h
        order = np.argsort(keys, kind="stable")
        ks = keys[order]
        del keys
        eq = np.flatnonzero(ks[1:] == ks[:-1])
        groups, k = [], 0
        while k < len(eq):
            lo = hi = int(eq[k])
            while k < len(eq) and int(eq[k]) == hi:
                hi += 1
                k += 1
            groups.append(sorted((int(q) for q in order[lo:hi + 1]), key=entry))
    for group in groups:
        for q1, q2 in zip(group, group[1:]):
            s0, n1, d1 = entry(q1)
            s1, n2, d2 = entry(q2)
            if (s0, n1, d1) != (s1, n2, d2):
                continue
            o1, o2 = other(q1), other(q2)
            arcs = {d.arc_pairs[int(t.arc[x])] for x in (s0, o1, o2)}
            hit = segment_intersection(segs[s0], segs[o1])
            found.add(Violation(ViolationKind.TRIPLE_INTERIOR_POINT, tuple(sorted(arcs)), None,
                                hit.point if hit else None))


def validate(d: Drawing) -> ValidationReport:
    """Check every simple-drawing invariant; never raises on a bad drawing."""
    return ValidationReport(list(d._analysis.violations))


def require_valid(d: Drawing) -> None:
    report = validate(d)
    if not report.ok:
        kinds = sorted(v.value for v in report.kinds())
        raise DrawingError(f"invalid drawing: {', '.join(kinds)}")


@dataclass(frozen=True)
class CrossingMatrix:
    """Sparse symmetric crossing counts between arcs of one drawing."""

    n_vertices: int
    arc_pairs: tuple
    keys: np.ndarray
    counts: np.ndarray

    def _arc(self, e) -> int:
        a, b = sorted(e)
        # combinatorial rank of (a, b) among pairs in lexicographic order
        n = self.n_vertices
        return a * n - a * (a + 1) // 2 + (b - a - 1)

    def count(self, e, f) -> int:
        x, y = sorted((self._arc(e), self._arc(f)))
        key = x * len(self.arc_pairs) + y
        pos = np.searchsorted(self.keys, key)
        if pos < len(self.keys) and self.keys[pos] == key:
            return int(self.counts[pos])
        return 0

    def pairs(self):
        """Yield ``((a, b), (c, d), count)`` for every crossing arc pair."""
        m = len(self.arc_pairs)
        for key, cnt in zip(self.keys, self.counts):
            x, y = divmod(int(key), m)
            yield self.arc_pairs[x], self.arc_pairs[y], int(cnt)

    def total(self) -> int:
        return int(self.counts.sum())

    def to_dense(self) -> np.ndarray:
        m = len(self.arc_pairs)
        out = np.zeros((m, m), dtype=np.int64)
        x, y = np.divmod(self.keys, m)
        out[x, y] = self.counts
        out[y, x] = self.counts
        return out


def crossing_matrix(d: Drawing) -> CrossingMatrix:
    a = d._analysis
    return CrossingMatrix(d.N, d.arc_pairs, a.cross_keys, a.cross_counts)


# apex and labeling

_PROBE_DIRECTIONS = ((0, -1), (-1, 0), (1, 0), (0, 1), (-1, -1), (1, -1), (-1, 1), (1, 1))


def _escape_direction(d: Drawing, v: int):
    """An integer direction whose ray from vertex ``v`` meets no arc, or None."""
    t = d._table
    _, vx, vy = d._frame
    x, y = vx[v], vy[v]
    for dx, dy in _PROBE_DIRECTIONS:
        if not K.ray_blocked(t, x, y, dx, dy).any():
            return (dx, dy)
    # every free direction lies strictly between two consecutive endpoint directions
    dirs = set()
    for px, py in zip(np.concatenate([t.x1, t.x2]), np.concatenate([t.y1, t.y2])):
        if px != x or py != y:
            dirs.add((int(px - x), int(py - y)))
    ordered = sorted(dirs, key=lambda p: _exact_angle_key(*p))
    for k, (ux, uy) in enumerate(ordered):
        wx, wy = ordered[(k + 1) % len(ordered)]
        if ux * wy - uy * wx > 0:
            cand = (ux + wx, uy + wy)
        elif len(ordered) > 1 and ux * wy - uy * wx == 0 and ux * wx + uy * wy > 0:
            continue
        else:
            cand = (-uy, ux)
        if not K.ray_blocked(t, x, y, *cand).any():
            return cand
    return None


def select_apex(d: Drawing) -> int:
    """Lowest (then leftmost) vertex that sees infinity along a straight ray.

    For straight-line drawings this is exactly the lexicographically smallest
    (y, x) hull vertex.
    """
    require_valid(d)
    for v in sorted(range(d.N), key=lambda k: (d.points[k].y, d.points[k].x)):
        if _escape_direction(d, v) is not None:
            return v
    raise NoOuterVertex("no vertex can be shown to lie on the unbounded cell")


@dataclass(frozen=True)
class Labeling:
    """Apex ``v0`` plus the counterclockwise order of the ground set.

    ``order[k]`` is the vertex index labelled ``v_{k+1}``.
    """

    apex: int
    order: tuple[int, ...]
    dropped: int | None = None

    @property
    def n(self) -> int:
        return len(self.order)


def _arc_shoelace(d: Drawing) -> dict:
    sums = K.arc_shoelace(d._table)
    return {pair: s for pair, s in zip(d.arc_pairs, sums)}


def _oriented(sh, a, b):
    return sh[(a, b)] if a < b else -sh[(b, a)]


def triangle_twice_areas(d: Drawing, lab: Labeling) -> dict:
    """Twice the signed area (in the integer frame) of every triangle loop."""
    sh = _arc_shoelace(d)
    v0 = lab.apex
    out = {}
    for i, j in itertools.combinations(range(lab.n), 2):
        a, b = lab.order[i], lab.order[j]
        out[(i, j)] = _oriented(sh, v0, a) + _oriented(sh, a, b) + _oriented(sh, b, v0)
    return out


def label_ccw(d: Drawing, apex: int) -> Labeling:
    """Order the non-apex vertices counterclockwise around the apex.

    The sweep starts at a free direction of the unbounded cell, so every
    triangle apex -> v_i -> v_j (i < j) runs counterclockwise.  An odd ground
    set loses its last vertex.
    """
    require_valid(d)
    esc = _escape_direction(d, apex)
    if esc is None:
        raise NoOuterVertex(f"vertex {d.ids[apex]!r} is not on the unbounded cell")
    ex, ey = esc
    p0 = d.points[apex]
    keyed = []
    for w in range(d.N):
        if w == apex:
            continue
        q = d.arc(apex, w).points[1]
        dx, dy = q.x - p0.x, q.y - p0.y
        # rotate so the escape direction points along +x
        rx, ry = dx * ex + dy * ey, dy * ex - dx * ey
        keyed.append((_exact_angle_key(rx, ry), w))
    keyed.sort()
    for (k1, w1), (k2, w2) in zip(keyed, keyed[1:]):
        if k1 == k2:
            raise AmbiguousRotation(f"arcs to {d.ids[w1]!r} and {d.ids[w2]!r} leave the apex together")
    order = [w for _, w in keyed]
    dropped = None
    if len(order) % 2:
        dropped = order.pop()
    lab = Labeling(apex, tuple(order), dropped)
    bad = [ij for ij, area in triangle_twice_areas(d, lab).items() if area <= 0]
    if bad:
        raise LabelingError(f"{len(bad)} triangles are not counterclockwise, e.g. {bad[0]}")
    return lab


def _exact_angle_key(dx: Fraction, dy: Fraction):
    upper = dy > 0 or (dy == 0 and dx > 0)
    if dy == 0:
        return (0 if upper else 1, 0, Fraction(0))
    return (0 if upper else 1, 1, Fraction(-dx) / dy)


@dataclass(frozen=True)
class Triangle:
    i: int
    j: int
    curve: ClosedCurve


def triangle_curve(d: Drawing, lab: Labeling, i: int, j: int, check: bool = True) -> Triangle:
    """The loop apex -> v_i -> v_j -> apex (0-based ground indices, i < j)."""
    if not 0 <= i < j < lab.n:
        raise IndexError(f"need 0 <= i < j < {lab.n}, got ({i}, {j})")
    a, b = lab.order[i], lab.order[j]
    try:
        curve = concat_closed([d.arc(lab.apex, a), d.arc(a, b), d.arc(b, lab.apex)], check=check)
    except GeometryError as exc:
        raise NonSimpleTriangle(str(exc)) from exc
    if signed_area(curve) < 0:
        curve = curve.reversed()
    return Triangle(i, j, curve)
