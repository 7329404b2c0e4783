import statistics

import numpy as np
import pytest

from disjointedges.drawing import Drawing, DrawingError, label_ccw, select_apex
from disjointedges.extract import (
    ConflictGraph,
    IdentityViolation,
    MissingRow,
    build_conflict_graph,
    extract_pipeline,
    turan_bound,
    turan_independent_set,
    verify_disjoint,
)
from disjointedges.gen import GenSpec, convex_position, generate
from disjointedges.geometry import Point
from disjointedges.matching import Matching
from disjointedges.setsys import RowKind, SetSystem, build_crossing_sets, build_interior_sets, stab_counts


def graph(n, edges):
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[u, v] = adj[v, u] = True
    return ConflictGraph([(2 * k, 2 * k + 1) for k in range(n)], adj)


def test_turan_examples():
    empty = graph(4, [])
    assert turan_independent_set(empty) == [0, 1, 2, 3] and turan_bound(4, 0) == 4
    full = graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert len(turan_independent_set(full)) == 1 and turan_bound(4, 6) == 1
    path = graph(4, [(0, 1), (1, 2), (2, 3)])
    assert turan_independent_set(path) == [0, 2] and turan_bound(4, 3) == 2


@pytest.mark.parametrize("seed", range(30))
def test_turan_greedy_meets_bound(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 25))
    p = rng.random()
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    g = graph(n, edges)
    ind = turan_independent_set(g)
    assert len(ind) >= turan_bound(n, len(edges))
    assert not g.adjacency[np.ix_(ind, ind)].any()


def test_verify_disjoint_examples():
    d = Drawing([(0, 0), (2, 0), (2, 2), (0, 2)])
    assert verify_disjoint(d, [(0, 1), (2, 3)]).ok
    diag = verify_disjoint(d, [(0, 2), (1, 3)])
    assert not diag.ok and diag.witness[2] == Point(1, 1)
    assert not verify_disjoint(d, [(0, 1), (1, 2)]).ok


def test_convex_nine():
    d = convex_position(9)
    report, st = extract_pipeline(d, keep_stages=True)
    assert len(report.chosen) == 4 and report.verified_disjoint
    assert report.conflict_edges == 0 and report.n == 8
    assert st.matching.n == 8


def test_triangle():
    report = extract_pipeline(Drawing([(0, 0), (3, 1), (1, 3)]))
    assert report.n == 2 and len(report.chosen) == 1 and report.verified_disjoint


def test_convex_consecutive_matching_has_no_conflicts():
    for N in (5, 9, 13):
        d = convex_position(N)
        lab = label_ccw(d, select_apex(d))
        s1, s2 = build_interior_sets(d, lab), build_crossing_sets(d, lab)
        pairs = [(2 * k, 2 * k + 1) for k in range(lab.n // 2)]
        m = Matching(tuple(pairs), 0, stab_counts(s1 | s2, pairs))
        assert build_conflict_graph(m, s1, s2).edge_count == 0


def conditions(m, s1, s2):
    """The four stabbing conditions evaluated one pair at a time."""
    def stabs(sys, kind, p, q):
        row = sys.members(kind, *p)
        return (q[0] in row) != (q[1] in row)

    out = set()
    for a, p in enumerate(m.pairs):
        for b, q in enumerate(m.pairs):
            if a < b and (stabs(s1, RowKind.INTERIOR, p, q) or stabs(s2, RowKind.CROSSING, p, q)
                          or stabs(s1, RowKind.INTERIOR, q, p) or stabs(s2, RowKind.CROSSING, q, p)):
                out.add((a, b))
    return out


@pytest.mark.parametrize("family,seed", [("random", 0), ("random", 5), ("polyline", 3)])
def test_conflict_graph_by_definition(family, seed):
    d = generate(GenSpec(family, 17, seed))
    report, st = extract_pipeline(d, keep_stages=True)
    expect = conflict = conditions(st.matching, st.interior, st.crossing)
    got = {(a, b) for a, b in zip(*np.nonzero(np.triu(st.conflict.adjacency, 1)))}
    assert got == expect
    assert not any((a, b) in conflict for a in st.independent for b in st.independent)
    # each vertex's two rows stab at most 2 * max_stab pairs
    assert report.conflict_edges <= len(st.matching.pairs) * 2 * st.matching.max_stab


def test_missing_row():
    s1 = SetSystem.from_sets(4, [(RowKind.INTERIOR, 0, 1, set())])
    s2 = SetSystem.from_sets(4, [(RowKind.CROSSING, 0, 1, set())])
    m = Matching(((0, 1), (2, 3)), 0, np.zeros(2))
    with pytest.raises(MissingRow):
        build_conflict_graph(m, s1, s2)


def test_identity_violation_message():
    exc = IdentityViolation([(1, 4, 2)])
    assert isinstance(exc, DrawingError) and "(i=1, j=4, k=2)" in str(exc)


def test_invalid_input_rejected():
    with pytest.raises(DrawingError):
        extract_pipeline(Drawing([(0, 0), (1, 1), (2, 2)]))


@pytest.mark.parametrize("seed", range(100))
def test_random_fifty_one(seed):
    report = extract_pipeline(generate(GenSpec("random", 51, seed)))
    assert report.verified_disjoint
    assert len(report.chosen) >= report.turan_bound


def test_median_chosen_grows_with_n():
    medians = []
    for N in (9, 17, 33):
        sizes = [len(extract_pipeline(generate(GenSpec("random", N, s))).chosen) for s in range(8)]
        medians.append(statistics.median(sizes))
    assert medians == sorted(medians)


def test_report_serialization_uses_ids():
    d = Drawing([(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)], ids=list("abcde"))
    doc = extract_pipeline(d).to_dict(d)
    assert doc["apex"] in "abcde" and "timings" not in doc
    assert all(u in "abcde" and v in "abcde" for u, v in doc["chosen"])
    assert set(extract_pipeline(d).to_dict(d, timings=True)["timings"]) >= {"validate", "matching"}
