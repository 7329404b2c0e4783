"""Exact maximum sets of pairwise disjoint edges for small drawings."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .drawing import Drawing, require_valid
from .extract import ExtractionReport, extract_pipeline, verify_disjoint
from .geometry import DegenerateContact, polyline_crossings
from .matching import MatchingConfig


class TooLarge(ValueError):
    pass


def disjointness_graph(d: Drawing) -> tuple[list[tuple[int, int]], list[int]]:
    """Edges of K and, per edge, a bitmask of the edges it conflicts with.

    Two edges conflict when they share a vertex or their arcs cross; the
    crossings come from the scalar predicates only.
    """
    edges = list(itertools.combinations(range(d.N), 2))
    masks = [0] * len(edges)
    for x, y in itertools.combinations(range(len(edges)), 2):
        e, f = edges[x], edges[y]
        if set(e) & set(f):
            hit = True
        else:
            try:
                hit = bool(polyline_crossings(d.arc(*e), d.arc(*f)))
            except DegenerateContact:
                hit = True
        if hit:
            masks[x] |= 1 << y
            masks[y] |= 1 << x
    return edges, masks


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _greedy(cands: int, masks) -> int:
    chosen = 0
    while cands:
        v = min(_bits(cands), key=lambda u: ((masks[u] & cands).bit_count(), u))
        chosen |= 1 << v
        cands &= ~(masks[v] | (1 << v))
    return chosen


def maximum_independent_set(masks: list[int]) -> int:
    """Branch and bound; returns the chosen vertices as a bitmask."""
    everything = (1 << len(masks)) - 1
    best = _greedy(everything, masks)
    best_size = best.bit_count()

    def search(current: int, size: int, cands: int):
        nonlocal best, best_size
        if not cands:
            if size > best_size:
                best, best_size = current, size
            return
        degs = {v: (masks[v] & cands).bit_count() for v in _bits(cands)}
        # alpha <= |cands| - min degree
        if size + cands.bit_count() - min(degs.values()) <= best_size:
            return
        v = max(degs, key=lambda u: (degs[u], -u))
        search(current | (1 << v), size + 1, cands & ~(masks[v] | (1 << v)))
        search(current, size, cands & ~(1 << v))

    search(0, 0, everything)
    return best


def max_disjoint_edges_exact(d: Drawing, limit_N: int = 12) -> tuple[int, list[tuple[int, int]]]:
    if d.N > limit_N:
        raise TooLarge(f"N={d.N} exceeds the oracle limit {limit_N}")
    require_valid(d)
    edges, masks = disjointness_graph(d)
    best = maximum_independent_set(masks)
    witness = [edges[k] for k in _bits(best)]
    if not verify_disjoint(d, witness).ok:
        raise AssertionError("oracle witness failed geometric verification")
    return len(witness), witness


@dataclass
class OracleComparison:
    pipeline_size: int
    oracle_size: int
    pipeline_witness: list[tuple[int, int]]
    oracle_witness: list[tuple[int, int]]
    both_verified: bool
    report: ExtractionReport


def compare_pipeline_vs_oracle(d: Drawing, cfg: MatchingConfig | None = None,
                               limit_N: int = 12) -> OracleComparison:
    size, witness = max_disjoint_edges_exact(d, limit_N)
    report = extract_pipeline(d, cfg)
    ok = report.verified_disjoint and verify_disjoint(d, witness).ok
    return OracleComparison(len(report.chosen), size, report.chosen, witness, ok, report)
