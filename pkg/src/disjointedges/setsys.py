"""Set systems over the labelled ground set, shatter probes and stabbing.

Ground index ``k`` stands for the vertex labelled ``v_{k+1}``.  Every row
is a packed bit vector (``numpy.packbits`` order) of length ``n``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernel as K
from .drawing import CrossingMatrix, Drawing, DrawingError, Labeling, crossing_matrix
from .geometry import ContactKind, Point, Polyline, segment_intersection


class InternalBoundaryContact(DrawingError):
    pass


class DegenerateArrangement(DrawingError):
    pass


class RowKind(str, enum.Enum):
    INTERIOR = "interior"
    CROSSING = "crossing"
    INTERVAL = "interval"


@dataclass(frozen=True)
class SetRow:
    kind: RowKind
    i: int
    j: int
    members: np.ndarray  # packed bits
    ground_size: int

    def dense(self) -> np.ndarray:
        return np.unpackbits(self.members, count=self.ground_size).astype(bool)

    def indices(self) -> list[int]:
        return [int(k) for k in np.flatnonzero(self.dense())]

    def __contains__(self, k: int) -> bool:
        return bool(self.members[k >> 3] >> (7 - (k & 7)) & 1)


class SetSystem:
    """A list of labelled rows ``(kind, i, j, bits)`` over ``range(ground_size)``."""

    def __init__(self, ground_size: int, kinds: Sequence[RowKind], pairs, dense: np.ndarray):
        dense = np.asarray(dense, dtype=bool).reshape(len(kinds), ground_size)
        self.ground_size = ground_size
        self.kinds = tuple(RowKind(k) for k in kinds)
        self.pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        self.bits = np.packbits(dense, axis=1)
        self._lookup = {(k, int(i), int(j)): r for r, (k, (i, j)) in enumerate(zip(self.kinds, self.pairs))}

    @classmethod
    def from_sets(cls, ground_size: int, rows: Iterable[tuple]) -> "SetSystem":
        """Rows given as ``(kind, i, j, iterable_of_members)``."""
        kinds, pairs, dense = [], [], []
        for kind, i, j, members in rows:
            vec = np.zeros(ground_size, dtype=bool)
            vec[list(members)] = True
            kinds.append(kind)
            pairs.append((i, j))
            dense.append(vec)
        return cls(ground_size, kinds, pairs, np.array(dense, dtype=bool).reshape(len(kinds), ground_size))

    def __len__(self):
        return len(self.kinds)

    @cached_property
    def dense(self) -> np.ndarray:
        """Unpacked ``(rows, ground_size)`` boolean matrix."""
        return np.unpackbits(self.bits, axis=1, count=self.ground_size).astype(bool)

    def row(self, r: int) -> SetRow:
        i, j = self.pairs[r]
        return SetRow(self.kinds[r], int(i), int(j), self.bits[r], self.ground_size)

    @property
    def rows(self) -> list[SetRow]:
        return [self.row(r) for r in range(len(self))]

    def find(self, kind: RowKind, i: int, j: int) -> int | None:
        return self._lookup.get((RowKind(kind), i, j))

    def members(self, kind: RowKind, i: int, j: int) -> set[int]:
        r = self.find(kind, i, j)
        if r is None:
            raise KeyError((kind, i, j))
        return set(self.row(r).indices())

    def subset(self, rows: Sequence[int]) -> "SetSystem":
        rows = list(rows)
        return SetSystem(self.ground_size, [self.kinds[r] for r in rows], self.pairs[rows], self.dense[rows])

    def __or__(self, other: "SetSystem") -> "SetSystem":
        if other.ground_size != self.ground_size:
            raise ValueError("ground sizes differ")
        return SetSystem(self.ground_size, self.kinds + other.kinds,
                         np.vstack([self.pairs, other.pairs]), np.vstack([self.dense, other.dense]))


def _ground_arcs(d: Drawing, lab: Labeling):
    """Arc ids of apex->v_k, and of v_i->v_j for all pairs i < j."""
    apex_arc = np.array([d.arc_id(lab.apex, v) for v in lab.order], dtype=np.int64)
    ii, jj = np.triu_indices(lab.n, k=1)
    chord = np.array([d.arc_id(lab.order[i], lab.order[j]) for i, j in zip(ii, jj)], dtype=np.int64)
    return apex_arc, ii, jj, chord


def build_interior_sets(d: Drawing, lab: Labeling) -> SetSystem:
    """Rows S[i, j]: ground vertices strictly inside triangle apex, v_i, v_j.

    Jordan parity along a +x ray is additive over the three arcs of the
    loop, so it is accumulated per arc once and combined by XOR.
    """
    t = d._table
    hit, on = d._point_relation
    order = np.array(lab.order, dtype=np.int64)
    parity = K.per_arc_parity(t, hit)[:, order]
    touches = K.per_arc_any(t, on)[:, order]
    apex_arc, ii, jj, chord = _ground_arcs(d, lab)
    inside = parity[apex_arc[ii]] ^ parity[chord] ^ parity[apex_arc[jj]]
    boundary = touches[apex_arc[ii]] | touches[chord] | touches[apex_arc[jj]]
    rows = np.arange(len(ii))
    inside[rows, ii] = inside[rows, jj] = False
    boundary[rows, ii] = boundary[rows, jj] = False
    if boundary.any():
        r, k = (int(v) for v in np.argwhere(boundary)[0])
        raise InternalBoundaryContact(f"v{k + 1} lies on triangle ({ii[r] + 1}, {jj[r] + 1})")
    return SetSystem(lab.n, [RowKind.INTERIOR] * len(ii), np.column_stack([ii, jj]), inside)


def build_crossing_sets(d: Drawing, lab: Labeling, cm: CrossingMatrix | None = None) -> SetSystem:
    """Rows S'[i, j]: ground vertices v_k whose apex arc crosses arc v_i v_j."""
    cm = crossing_matrix(d) if cm is None else cm
    n_arcs = len(d.arc_pairs)
    apex_arc, ii, jj, chord = _ground_arcs(d, lab)
    ground_of = np.full(n_arcs, -1, dtype=np.int64)
    ground_of[apex_arc] = np.arange(lab.n)
    x, y = np.divmod(cm.keys[cm.counts > 0], n_arcs)
    crosses = np.zeros((n_arcs, lab.n), dtype=bool)
    for a, b in ((x, y), (y, x)):
        k = ground_of[a]
        sel = k >= 0
        crosses[b[sel], k[sel]] = True
    return SetSystem(lab.n, [RowKind.CROSSING] * len(ii), np.column_stack([ii, jj]), crosses[chord])


def build_intervals(n: int) -> SetSystem:
    """Rows I[i, j] = {k : i < k < j}."""
    if n < 2:
        raise ValueError("need n >= 2")
    ii, jj = np.triu_indices(n, k=1)
    k = np.arange(n)
    dense = (k[None, :] > ii[:, None]) & (k[None, :] < jj[:, None])
    return SetSystem(n, [RowKind.INTERVAL] * len(ii), np.column_stack([ii, jj]), dense)


def check_symdiff_identity(s1: SetSystem, s2: SetSystem, iv: SetSystem) -> list[tuple[int, int, int]]:
    """Every ``(i, j, k)`` where S'[i,j] differs from S[i,j] xor I[i,j]."""
    bad = []
    for r, (i, j) in enumerate(s2.pairs):
        i, j = int(i), int(j)
        r1 = s1.find(RowKind.INTERIOR, i, j)
        ri = iv.find(RowKind.INTERVAL, i, j)
        if r1 is None or ri is None:
            raise KeyError(f"missing row for pair ({i}, {j})")
        diff = s2.dense[r] ^ s1.dense[r1] ^ iv.dense[ri]
        bad.extend((i, j, int(k)) for k in np.flatnonzero(diff))
    return bad


def _as_dense(rows, ground_size: int) -> np.ndarray:
    if isinstance(rows, SetSystem):
        return rows.dense
    rows = list(rows)
    if not rows:
        return np.zeros((0, ground_size), dtype=bool)
    return np.array([r.dense() if isinstance(r, SetRow) else np.asarray(r, dtype=bool) for r in rows])


def count_equiv_classes(rows, ground_size: int) -> int:
    """Distinct membership signatures among the ground elements."""
    if ground_size == 0:
        return 0
    dense = _as_dense(rows, ground_size)
    if dense.shape[0] == 0:
        return 1
    sig = np.packbits(dense, axis=0).T
    return len(np.unique(sig, axis=0))


@dataclass(frozen=True)
class ShatterProbe:
    family: str
    m: int
    observed_classes: int
    bound: int
    trials: int

    @property
    def ok(self) -> bool:
        return self.observed_classes <= self.bound


def shatter_bound(kinds: set, m: int) -> tuple[str, int]:
    """Name of the family and the class-count bound that applies to it."""
    if kinds == {RowKind.INTERIOR}:
        return "interior", 5 * m * m
    if kinds == {RowKind.INTERVAL}:
        return "interval", 3 * m
    if kinds <= {RowKind.INTERIOR, RowKind.CROSSING}:
        return ("crossing" if kinds == {RowKind.CROSSING} else "mixed"), 120 * m ** 3
    raise ValueError(f"no bound known for row kinds {sorted(k.value for k in kinds)}")


def probe_shatter(sys: SetSystem, m: int, trials: int, seed) -> ShatterProbe:
    """Largest class count over ``trials`` random ``m``-row subfamilies."""
    if m > len(sys):
        raise ValueError(f"m={m} exceeds the {len(sys)} rows available")
    family, bound = shatter_bound(set(sys.kinds), m)
    rng = np.random.default_rng(seed)
    best = 0
    for _ in range(trials):
        pick = rng.choice(len(sys), size=m, replace=False)
        best = max(best, count_equiv_classes(sys.dense[pick], sys.ground_size))
    return ShatterProbe(family, m, best, bound, trials)


def arrangement_cell_count(lines: Sequence[Polyline]) -> int:
    """Number of faces (unbounded one included) cut out by the polylines.

    Closed curves are polylines whose last point repeats the first.  Uses
    Euler's formula ``F = E - V + 1 + C`` on the exact planar graph whose
    nodes are all polyline points and crossing points.
    """
    segs = []
    for line in lines:
        segs.extend(line.segments())
    cuts: list[set[Point]] = [{s.a, s.b} for s in segs]
    for x in range(len(segs)):
        for y in range(x + 1, len(segs)):
            hit = segment_intersection(segs[x], segs[y])
            if hit is None or hit.kind is ContactKind.SHARED_ENDPOINT:
                continue
            if hit.kind is ContactKind.DEGENERATE:
                raise DegenerateArrangement(f"curves touch without crossing at {hit.point}")
            cuts[x].add(hit.point)
            cuts[y].add(hit.point)

    nodes: dict[Point, int] = {}
    parent: list[int] = []

    def node(p):
        if p not in nodes:
            nodes[p] = len(parent)
            parent.append(len(parent))
        return nodes[p]

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = set()
    for s, pts in zip(segs, cuts):
        key = (lambda p: p.x) if s.a.x != s.b.x else (lambda p: p.y)
        chain = sorted(pts, key=key)
        for p, q in zip(chain, chain[1:]):
            u, v = node(p), node(q)
            edges.add((min(u, v), max(u, v)))
            parent[find(u)] = find(v)
    for p in {s.a for s in segs} | {s.b for s in segs}:
        node(p)
    components = len({find(k) for k in range(len(parent))})
    return len(edges) - len(nodes) + 1 + components


def cell_count_triangles(d: Drawing, lab: Labeling, pairs: Sequence[tuple[int, int]]) -> int:
    """Cells of the plane cut by the given triangles (shared arcs counted once)."""
    if len(set(pairs)) != len(pairs):
        raise ValueError("triangle pairs must be distinct")
    arcs = set()
    for i, j in pairs:
        a, b = lab.order[i], lab.order[j]
        for u, v in ((lab.apex, a), (a, b), (lab.apex, b)):
            arcs.add((min(u, v), max(u, v)))
    return arrangement_cell_count([d.arcs[pair] for pair in sorted(arcs)])


def stabbing_number(row: SetRow, pairs) -> int:
    """How many pairs have exactly one endpoint in the row."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    bits = row.dense()
    return int(np.count_nonzero(bits[pairs[:, 0]] != bits[pairs[:, 1]]))


def stab_counts(sys: SetSystem, pairs) -> np.ndarray:
    """Stabbing number of every row against the pairs (XOR + popcount)."""
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    if len(pairs) == 0 or len(sys) == 0:
        return np.zeros(len(sys), dtype=np.int64)
    first = np.packbits(sys.dense[:, pairs[:, 0]], axis=1)
    second = np.packbits(sys.dense[:, pairs[:, 1]], axis=1)
    return np.bitwise_count(first ^ second).sum(axis=1, dtype=np.int64)
