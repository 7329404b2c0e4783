"""
Pipeline versus the exact maximum
=================================

For small drawings the largest set of pairwise disjoint edges can be found
by branch and bound over the disjointness graph.
"""
from disjointedges.gen import GenSpec, generate
from disjointedges.oracle import compare_pipeline_vs_oracle

for family in ("convex", "random", "polyline"):
    for seed in range(3 if family != "convex" else 1):
        c = compare_pipeline_vs_oracle(generate(GenSpec(family, 10, seed)))
        print(f"{family:9s} seed {seed}: pipeline {c.pipeline_size}  exact {c.oracle_size}  "
              f"both verified {c.both_verified}")
