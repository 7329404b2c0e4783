"""JSON drawing files (format version 1) with exact coordinates."""
from __future__ import annotations

import json
from fractions import Fraction

from .drawing import Drawing, DrawingError

FORMAT_VERSION = 1


class DrawFileError(ValueError):
    pass


def _coord(value) -> Fraction:
    # bool is an int subclass; floats would smuggle in binary rounding
    if isinstance(value, bool) or isinstance(value, float):
        raise DrawFileError(f"coordinate {value!r} must be an integer or an exact string")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DrawFileError(f"bad coordinate {value!r}") from exc
    raise DrawFileError(f"bad coordinate {value!r}")


def _format(q: Fraction) -> str:
    return str(q)


def drawing_from_dict(doc) -> Drawing:
    if not isinstance(doc, dict):
        raise DrawFileError("top level must be an object")
    if doc.get("format_version") != FORMAT_VERSION:
        raise DrawFileError(f"format_version must be {FORMAT_VERSION}")
    verts = doc.get("vertices")
    if not isinstance(verts, list) or not verts:
        raise DrawFileError("vertices must be a non-empty list")
    ids, points = [], []
    for v in verts:
        if not isinstance(v, dict) or not {"id", "x", "y"} <= v.keys():
            raise DrawFileError("each vertex needs id, x and y")
        if not isinstance(v["id"], (str, int)) or isinstance(v["id"], bool):
            raise DrawFileError(f"vertex id {v['id']!r} must be a string or integer")
        ids.append(v["id"])
        points.append((_coord(v["x"]), _coord(v["y"])))
    if len(set(ids)) != len(ids):
        raise DrawFileError("duplicate vertex ids")
    known = set(ids)
    arcs = {}
    for a in doc.get("arcs") or []:
        if not isinstance(a, dict) or not {"u", "v", "points"} <= a.keys():
            raise DrawFileError("each arc needs u, v and points")
        if a["u"] not in known or a["v"] not in known:
            raise DrawFileError(f"arc {a['u']!r}-{a['v']!r} names an unknown vertex")
        pts = a["points"]
        if not isinstance(pts, list) or len(pts) < 2 or not all(isinstance(p, list) and len(p) == 2 for p in pts):
            raise DrawFileError(f"arc {a['u']!r}-{a['v']!r} needs a list of [x, y] points")
        arcs[(a["u"], a["v"])] = [(_coord(x), _coord(y)) for x, y in pts]
    try:
        return Drawing(points, ids, arcs)
    except (DrawingError, ValueError) as exc:
        raise DrawFileError(str(exc)) from exc


def drawing_to_dict(d: Drawing) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "vertices": [{"id": vid, "x": _format(p.x), "y": _format(p.y)} for vid, p in zip(d.ids, d.points)],
    }
    bent = [(a, b) for a, b in d.arc_pairs if len(d.arcs[(a, b)]) > 2]
    if bent:
        doc["arcs"] = [
            {"u": d.ids[a], "v": d.ids[b],
             "points": [[_format(p.x), _format(p.y)] for p in d.arcs[(a, b)].points]}
            for a, b in bent
        ]
    return doc


def dumps(d: Drawing) -> str:
    return json.dumps(drawing_to_dict(d), indent=1) + "\n"


def loads(text: str) -> Drawing:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DrawFileError(f"not JSON: {exc}") from exc
    return drawing_from_dict(doc)


def read(path: str) -> Drawing:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write(d: Drawing, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(d))
