"""Disjoint edges in complete simple topological graphs."""
