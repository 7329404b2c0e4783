"""
Disjoint edges in a convex drawing
==================================

Points on a parabola, joined by straight segments. Every stage of the
extraction is printed so the intermediate objects can be inspected.
"""
import numpy as np

from disjointedges.drawing import crossing_matrix
from disjointedges.extract import extract_pipeline
from disjointedges.gen import convex_position

d = convex_position(13)
print("vertices:", [(int(p.x), int(p.y)) for p in d.points][:5], "...")
print("crossings:", crossing_matrix(d).total())

report, st = extract_pipeline(d, keep_stages=True)

# the apex is dropped from the ground set, and one more vertex when n is odd
print("apex:", report.apex, "ground order:", st.labeling.order)

# interiors are empty and the crossing rows are plain intervals
print("nonempty interior rows:", int(st.interior.dense.any(axis=1).sum()))
print("crossing rows equal intervals:", bool((st.crossing.dense == st.intervals.dense).all()))

print("matching:", st.matching.pairs)
print("stab histogram:", np.bincount(st.matching.stab_histogram))
print("conflict edges:", st.conflict.edge_count)
print("chosen:", report.chosen, "verified:", report.verified_disjoint)
