"""Exact planar predicates on rational points, segments and polylines.

Every predicate here works on :class:`fractions.Fraction` coordinates and
never rounds.  These are the scalar reference routines; the vectorized
integer kernels in :mod:`disjointedges._kernel` are checked against them.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence


class GeometryError(ValueError):
    pass


class DegenerateContact(GeometryError):
    """Two arcs touch without crossing transversally."""

    def __init__(self, message: str, point: "Point | None" = None):
        super().__init__(message)
        self.point = point


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("binary floats are not exact; pass int, Fraction or str")
    return Fraction(value)


class _PointBase(NamedTuple):
    x: Fraction
    y: Fraction


class Point(_PointBase):
    __slots__ = ()

    def __new__(cls, x, y):
        return super().__new__(cls, as_fraction(x), as_fraction(y))

    def __sub__(self, other):
        return (self.x - other.x, self.y - other.y)

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


class _SegmentBase(NamedTuple):
    a: Point
    b: Point


class Segment(_SegmentBase):
    __slots__ = ()

    def __new__(cls, a, b):
        a, b = Point(*a), Point(*b)
        if a == b:
            raise GeometryError(f"zero-length segment at {a}")
        return super().__new__(cls, a, b)


class Orientation(enum.IntEnum):
    CW = -1
    COLLINEAR = 0
    CCW = 1


def cross(p, q, r) -> Fraction:
    """Twice the signed area of triangle pqr."""
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def orient(p, q, r) -> Orientation:
    d = cross(p, q, r)
    return Orientation((d > 0) - (d < 0))


def _on_segment(p, a, b) -> bool:
    # assumes p, a, b collinear
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


class ContactKind(enum.Enum):
    PROPER = "proper"
    SHARED_ENDPOINT = "shared_endpoint"
    DEGENERATE = "degenerate"


class Contact(NamedTuple):
    kind: ContactKind
    point: Point


def segment_intersection(s, t) -> Contact | None:
    """Classify how two closed segments meet.

    Returns ``None`` when they are disjoint.  A PROPER contact is a
    transversal crossing of the two interiors; SHARED_ENDPOINT means the
    segments meet only at one common endpoint; anything else that touches
    (collinear overlap, an endpoint resting on the other interior) is
    DEGENERATE, with one witness point of the contact.
    """
    a, b = s
    c, d = t
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)

    if o1 * o2 < 0 and o3 * o4 < 0:
        den = cross((0, 0), (b[0] - a[0], b[1] - a[1]), (d[0] - c[0], d[1] - c[1]))
        num = cross((0, 0), (c[0] - a[0], c[1] - a[1]), (d[0] - c[0], d[1] - c[1]))
        u = num / den
        return Contact(ContactKind.PROPER, Point(a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])))

    touching = []
    if o1 == 0 and _on_segment(c, a, b):
        touching.append(Point(*c))
    if o2 == 0 and _on_segment(d, a, b):
        touching.append(Point(*d))
    if o3 == 0 and _on_segment(a, c, d):
        touching.append(Point(*a))
    if o4 == 0 and _on_segment(b, c, d):
        touching.append(Point(*b))
    if not touching:
        return None

    shared = {p for p in (Point(*a), Point(*b)) if p in (Point(*c), Point(*d))}
    if len(shared) == 1 and set(touching) <= shared:
        return Contact(ContactKind.SHARED_ENDPOINT, shared.pop())
    return Contact(ContactKind.DEGENERATE, touching[0])


class Polyline:
    """An arc given by two or more points, consecutive points distinct."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable):
        pts = tuple(Point(*p) for p in points)
        if len(pts) < 2:
            raise GeometryError("a polyline needs at least two points")
        for p, q in zip(pts, pts[1:]):
            if p == q:
                raise GeometryError(f"repeated consecutive point {p}")
        self.points = pts

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    @property
    def joints(self) -> tuple:
        return self.points[1:-1]

    def segments(self) -> list[Segment]:
        return [Segment(p, q) for p, q in zip(self.points, self.points[1:])]

    def reversed(self) -> "Polyline":
        return Polyline(self.points[::-1])

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, Polyline) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        return "Polyline([" + ", ".join(f"({p.x}, {p.y})" for p in self.points) + "])"


def self_intersections(line: Polyline) -> list[Point]:
    """Witness points where a polyline touches itself; empty iff it is simple."""
    segs = line.segments()
    bad = []
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            hit = segment_intersection(segs[i], segs[j])
            if hit is None:
                continue
            if j == i + 1 and hit.kind is ContactKind.SHARED_ENDPOINT:
                continue
            bad.append(hit.point)
    return bad


def polyline_contacts(a: Polyline, b: Polyline) -> tuple[list[Point], list[Point]]:
    """Transversal crossings of two arcs, and their shared arc endpoints.

    Raises :class:`DegenerateContact` on tangency, overlap, or any contact
    at an interior joint of either arc.
    """
    ends = {a.start, a.end} & {b.start, b.end}
    crossings: list[Point] = []
    shared: set[Point] = set()
    for s in a.segments():
        for t in b.segments():
            hit = segment_intersection(s, t)
            if hit is None:
                continue
            if hit.kind is ContactKind.DEGENERATE:
                raise DegenerateContact("arcs touch without crossing", hit.point)
            if hit.kind is ContactKind.SHARED_ENDPOINT:
                if hit.point not in ends:
                    raise DegenerateContact("arcs meet at an interior joint", hit.point)
                shared.add(hit.point)
                continue
            crossings.append(hit.point)
    return crossings, sorted(shared)


def polyline_crossings(a: Polyline, b: Polyline) -> list[Point]:
    return polyline_contacts(a, b)[0]


class Location(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_BOUNDARY = "on_boundary"


class ClosedCurve:
    """A simple closed polygonal loop; the closing edge is implicit."""

    __slots__ = ("points",)

    def __init__(self, points: Iterable, check: bool = True):
        pts = tuple(Point(*p) for p in points)
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts = pts[:-1]
        if len(pts) < 3:
            raise GeometryError("a closed curve needs at least three points")
        self.points = pts
        if check:
            loop = Polyline(pts + (pts[0],))
            segs = loop.segments()
            k = len(segs)
            for i in range(k):
                for j in range(i + 1, k):
                    hit = segment_intersection(segs[i], segs[j])
                    if hit is None:
                        continue
                    neighbours = j == i + 1 or (i == 0 and j == k - 1)
                    if neighbours and hit.kind is ContactKind.SHARED_ENDPOINT:
                        continue
                    raise GeometryError(f"closed curve is not simple near {hit.point}")
            if signed_area(self) == 0:
                raise GeometryError("closed curve encloses zero area")

    def edges(self):
        pts = self.points
        return zip(pts, pts[1:] + pts[:1])

    def reversed(self) -> "ClosedCurve":
        return ClosedCurve(self.points[::-1], check=False)

    def __len__(self):
        return len(self.points)


def signed_area(c: ClosedCurve) -> Fraction:
    """Shoelace area; positive iff the loop runs counterclockwise."""
    total = Fraction(0)
    for p, q in c.edges():
        total += p.x * q.y - q.x * p.y
    return total / 2


def point_in_closed_curve(p, c: ClosedCurve, direction: str = "x") -> Location:
    """Jordan parity of ``p`` against ``c``.

    ``direction="x"`` casts a ray towards +x and counts an edge iff one
    endpoint is strictly below ``p`` and the other at-or-above it;
    ``direction="y"`` is the same rule with the axes swapped (ray towards +y).
    """
    if direction not in ("x", "y"):
        raise ValueError("direction must be 'x' or 'y'")
    p = Point(*p)
    inside = False
    for a, b in c.edges():
        if orient(a, b, p) == 0 and _on_segment(p, a, b):
            return Location.ON_BOUNDARY
        if direction == "x":
            lo, hi = (a, b) if a.y < b.y else (b, a)
            if lo.y < p.y <= hi.y and orient(lo, hi, p) > 0:
                inside = not inside
        else:
            lo, hi = (a, b) if a.x < b.x else (b, a)
            if lo.x < p.x <= hi.x and orient(lo, hi, p) < 0:
                inside = not inside
    return Location.INSIDE if inside else Location.OUTSIDE


def concat_closed(parts: Sequence[Polyline], check: bool = True) -> ClosedCurve:
    """Join arcs end to start into one loop."""
    pts: list[Point] = []
    for k, arc in enumerate(parts):
        if pts and pts[-1] != arc.start:
            raise GeometryError(f"arc {k} does not continue the loop")
        pts.extend(arc.points[1:] if pts else arc.points)
    if pts[0] != pts[-1]:
        raise GeometryError("arcs do not close up")
    return ClosedCurve(pts[:-1], check=check)
