"""
How the matching and the answer scale
=====================================

The reweighting matching keeps max_stab / n^(2/3) roughly flat, and the
number of disjoint edges found grows at least like n^(1/3).
"""
from disjointedges.extract import extract_pipeline
from disjointedges.gen import GenSpec, generate

print(f"{'N':>4} {'n':>4} {'max_stab':>8} {'stab/n^2/3':>10} {'chosen':>6} {'chosen/n^1/3':>12}")
for N in (9, 17, 33, 65):
    r = extract_pipeline(generate(GenSpec("random", N, 0)))
    print(f"{N:4d} {r.n:4d} {r.max_stab:8d} {r.stab_ratio:10.3f} {len(r.chosen):6d} "
          f"{len(r.chosen) / r.n ** (1 / 3):12.3f}")
