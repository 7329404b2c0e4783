"""Vectorized exact integer kernels over all segments of a drawing.

Rational coordinates are scaled by the lcm of their denominators and
translated to the origin.  When the result fits comfortably in int64 (every
product of two coordinate differences, and sums of a few of them, stay
below 2**63) the arrays are int64; otherwise they fall back to Python-int
object arrays, which are slower but equally exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INT64_COORD_LIMIT = 1 << 28

NONE, PROPER, SHARED, SUSPECT = 0, 1, 2, 3


def integer_frame(coords):
    """Scale and shift rational (x, y) pairs onto a common integer grid.

    Returns ``(xs, ys, scale, origin)`` where ``xs``/``ys`` are arrays with
    ``x == origin[0] + xs / scale``.
    """
    scale = 1
    for x, y in coords:
        scale = math.lcm(scale, x.denominator, y.denominator)
    ix = [x.numerator * (scale // x.denominator) for x, _ in coords]
    iy = [y.numerator * (scale // y.denominator) for _, y in coords]
    ox, oy = min(ix), min(iy)
    ix = [v - ox for v in ix]
    iy = [v - oy for v in iy]
    top = max(max(ix), max(iy)) if ix else 0
    dtype = np.int64 if top < INT64_COORD_LIMIT else object
    return np.array(ix, dtype=dtype), np.array(iy, dtype=dtype), scale, (ox, oy)


def _cross(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _sign(v):
    return np.sign(v).astype(np.int8)


def _between(v, p, q):
    return (np.minimum(p, q) <= v) & (v <= np.maximum(p, q))


@dataclass(frozen=True)
class SegmentTable:
    """All segments of a set of polylines, stored arc after arc."""

    x1: np.ndarray
    y1: np.ndarray
    x2: np.ndarray
    y2: np.ndarray
    arc: np.ndarray      # owning arc index per segment
    pos: np.ndarray      # position of the segment inside its arc
    arc_start: np.ndarray  # first segment index of each arc (plus a sentinel)

    @property
    def size(self) -> int:
        return len(self.arc)

    @property
    def dtype(self):
        return self.x1.dtype


def build_table(arc_points_int) -> SegmentTable:
    """``arc_points_int``: list (one per arc) of lists of integer (x, y)."""
    x1, y1, x2, y2, arc, pos, starts = [], [], [], [], [], [], [0]
    for k, pts in enumerate(arc_points_int):
        for p, (a, b) in enumerate(zip(pts, pts[1:])):
            x1.append(a[0])
            y1.append(a[1])
            x2.append(b[0])
            y2.append(b[1])
            arc.append(k)
            pos.append(p)
        starts.append(len(arc))
    big = max((abs(v) for v in x1 + y1 + x2 + y2), default=0)
    dtype = np.int64 if big < INT64_COORD_LIMIT else object
    return SegmentTable(
        np.array(x1, dtype=dtype), np.array(y1, dtype=dtype),
        np.array(x2, dtype=dtype), np.array(y2, dtype=dtype),
        np.array(arc, dtype=np.int32), np.array(pos, dtype=np.int32),
        np.array(starts, dtype=np.int64),
    )


def _reduce(num, den):
    neg = den < 0
    num = np.where(neg, -num, num)
    den = np.where(neg, -den, den)
    g = np.gcd(num, den)
    g = np.where(g == 0, 1, g)
    return num // g, den // g


@dataclass
class PairContacts:
    """Touching segment pairs ``i < j`` with their contact codes.

    For PROPER pairs, ``(num_i, den_i)`` is the reduced crossing parameter
    along segment ``i`` and ``(num_j, den_j)`` along segment ``j``.
    """

    i: np.ndarray
    j: np.ndarray
    code: np.ndarray
    num_i: np.ndarray
    den_i: np.ndarray
    num_j: np.ndarray
    den_j: np.ndarray


def pair_contacts(t: SegmentTable, block_cells: int = 1 << 22) -> PairContacts:
    """Classify every pair of segments that touch, in exact arithmetic."""
    m = t.size
    xlo, xhi = np.minimum(t.x1, t.x2), np.maximum(t.x1, t.x2)
    ylo, yhi = np.minimum(t.y1, t.y2), np.maximum(t.y1, t.y2)
    rows = max(1, block_cells // max(m, 1))
    out = {k: [] for k in ("i", "j", "code", "ni", "di", "nj", "dj")}
    for r0 in range(0, m, rows):
        r1 = min(m, r0 + rows)
        bi = np.arange(r0, r1)[:, None]
        cj = np.arange(r0, m)[None, :]
        overlap = (
            (cj > bi)
            & (xlo[r0:r1, None] <= xhi[None, r0:]) & (xlo[None, r0:] <= xhi[r0:r1, None])
            & (ylo[r0:r1, None] <= yhi[None, r0:]) & (ylo[None, r0:] <= yhi[r0:r1, None])
        )
        ii, jj = np.nonzero(overlap)
        if len(ii) == 0:
            continue
        ii = (ii + r0).astype(np.int32)
        jj = (jj + r0).astype(np.int32)
        code, ni, di, nj, dj = _classify(t, ii, jj)
        keep = code != NONE
        for key, arr in (("i", ii), ("j", jj), ("code", code), ("ni", ni), ("di", di), ("nj", nj), ("dj", dj)):
            out[key].append(arr[keep])
    cat = {}
    for key in list(out):
        parts = out.pop(key)
        if parts:
            cat[key] = np.concatenate(parts)
        else:
            cat[key] = np.zeros(0, dtype=np.int8 if key == "code" else (t.dtype if key[0] in "nd" else np.int32))
    return PairContacts(cat["i"], cat["j"], cat["code"], cat["ni"], cat["di"], cat["nj"], cat["dj"])


def _classify(t: SegmentTable, ii, jj):
    ax, ay, bx, by = t.x1[ii], t.y1[ii], t.x2[ii], t.y2[ii]
    cx, cy, dx, dy = t.x1[jj], t.y1[jj], t.x2[jj], t.y2[jj]
    s1 = _sign(_cross(ax, ay, bx, by, cx, cy))
    s2 = _sign(_cross(ax, ay, bx, by, dx, dy))
    s3 = _sign(_cross(cx, cy, dx, dy, ax, ay))
    s4 = _sign(_cross(cx, cy, dx, dy, bx, by))
    proper = (s1 * s2 < 0) & (s3 * s4 < 0)
    code = np.zeros(len(ii), dtype=np.int8)
    code[proper] = PROPER

    # touching needs a zero orientation; classify that (small) subset only
    z = np.nonzero((s1 == 0) | (s2 == 0) | (s3 == 0) | (s4 == 0))[0]
    if len(z):
        ax_, ay_, bx_, by_ = ax[z], ay[z], bx[z], by[z]
        cx_, cy_, dx_, dy_ = cx[z], cy[z], dx[z], dy[z]
        tc = (s1[z] == 0) & _between(cx_, ax_, bx_) & _between(cy_, ay_, by_)
        td = (s2[z] == 0) & _between(dx_, ax_, bx_) & _between(dy_, ay_, by_)
        ta = (s3[z] == 0) & _between(ax_, cx_, dx_) & _between(ay_, cy_, dy_)
        tb = (s4[z] == 0) & _between(bx_, cx_, dx_) & _between(by_, cy_, dy_)
        touch = tc | td | ta | tb
        eq_ac = (ax_ == cx_) & (ay_ == cy_)
        eq_ad = (ax_ == dx_) & (ay_ == dy_)
        eq_bc = (bx_ == cx_) & (by_ == cy_)
        eq_bd = (bx_ == dx_) & (by_ == dy_)
        nshared = eq_ac.astype(np.int8) + eq_ad + eq_bc + eq_bd
        extra = (
            (ta & ~(eq_ac | eq_ad)) | (tb & ~(eq_bc | eq_bd))
            | (tc & ~(eq_ac | eq_bc)) | (td & ~(eq_ad | eq_bd))
        )
        sub = np.where(touch, SUSPECT, NONE).astype(np.int8)
        sub[touch & (nshared == 1) & ~extra] = SHARED
        code[z] = sub

    p = np.nonzero(proper)[0]
    rx, ry = bx[p] - ax[p], by[p] - ay[p]
    sx, sy = dx[p] - cx[p], dy[p] - cy[p]
    qx, qy = cx[p] - ax[p], cy[p] - ay[p]
    den = rx * sy - ry * sx
    ni, di = _reduce(qx * sy - qy * sx, den)
    nj, dj = _reduce(qx * ry - qy * rx, den)
    full = []
    for arr in (ni, di, nj, dj):
        out = np.zeros(len(ii), dtype=arr.dtype)
        out[p] = arr
        full.append(out)
    return (code, *full)


def point_segment_relation(t: SegmentTable, px, py):
    """Per (segment, point): half-open +x ray crossing flag and on-segment flag.

    Both are ``(segments, points)`` boolean matrices.
    """
    ax, ay = t.x1[:, None], t.y1[:, None]
    bx, by = t.x2[:, None], t.y2[:, None]
    px, py = px[None, :], py[None, :]
    o = _sign(_cross(ax, ay, bx, by, px, py))
    on = (o == 0) & _between(px, ax, bx) & _between(py, ay, by)
    up = ay < by
    lo_y = np.where(up, ay, by)
    hi_y = np.where(up, by, ay)
    # orientation of p against the edge directed upwards
    o_up = np.where(up, o, -o)
    hit = (lo_y < py) & (py <= hi_y) & (o_up > 0)
    return hit, on


def per_arc_parity(t: SegmentTable, hit: np.ndarray) -> np.ndarray:
    """Sum ray-hit flags over each arc's segments, modulo 2."""
    sums = np.add.reduceat(hit.astype(np.int64), t.arc_start[:-1], axis=0)
    return (sums & 1).astype(bool)


def per_arc_any(t: SegmentTable, flags: np.ndarray) -> np.ndarray:
    return np.add.reduceat(flags.astype(np.int64), t.arc_start[:-1], axis=0) > 0


def arc_shoelace(t: SegmentTable) -> list[int]:
    """Exact sum of x1*y2 - x2*y1 over each arc, as Python ints."""
    x1, y1 = t.x1.astype(object), t.y1.astype(object)
    x2, y2 = t.x2.astype(object), t.y2.astype(object)
    terms = x1 * y2 - x2 * y1
    sums = np.add.reduceat(terms, t.arc_start[:-1]) if len(terms) else terms
    return [int(v) for v in sums]


def ray_blocked(t: SegmentTable, vx, vy, dx, dy) -> np.ndarray:
    """Which segments meet the ray ``v + s*d`` (s > 0)."""
    ax, ay, bx, by = t.x1, t.y1, t.x2, t.y2
    sa = _sign(dx * (ay - vy) - dy * (ax - vx))
    sb = _sign(dx * (by - vy) - dy * (bx - vx))
    ahead_a = (ax - vx) * dx + (ay - vy) * dy > 0
    ahead_b = (bx - vx) * dx + (by - vy) * dy > 0
    collinear = (sa == 0) & (sb == 0)
    blocked = collinear & (ahead_a | ahead_b)
    straddle = ~collinear & (sa * sb <= 0)
    # crossing parameter along the ray has the sign of (a-v) x (b-a) over d x (b-a)
    ex, ey = bx - ax, by - ay
    p1 = _sign((ax - vx) * ey - (ay - vy) * ex)
    p2 = _sign(dx * ey - dy * ex)
    blocked |= straddle & (p1 * p2 > 0)
    return blocked
