"""Perfect matchings of the ground set with low stabbing number.

The matching is grown one pair per round.  Each row carries a weight,
initially 1; a round picks the unmatched pair whose stabbing rows have the
least total weight and multiplies those rows' weights by a fixed factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .setsys import SetSystem, stab_counts

# max_stab / n**(2/3) never exceeded this on the generator families for
# n in {16, 32, 64, 128}; regression threshold, not a proven constant
CALIBRATED_STAB_CONSTANT = 0.63

LIMB_BITS = 32


class GroundTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MatchingConfig:
    weight_multiplier: Fraction = Fraction(2)
    tie_break: str = "lex"
    stab_constant_C1: float = CALIBRATED_STAB_CONSTANT

    def __post_init__(self):
        object.__setattr__(self, "weight_multiplier", Fraction(self.weight_multiplier))
        if self.weight_multiplier <= 1:
            raise ValueError("weight multiplier must exceed 1")
        if self.tie_break != "lex":
            raise ValueError("only lexicographic tie-breaking is supported")


@dataclass
class Matching:
    pairs: tuple          # (u, w) with u < w, in the order they were chosen
    max_stab: int
    stab_histogram: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return 2 * len(self.pairs)

    def sorted_pairs(self) -> list[tuple[int, int]]:
        return sorted(self.pairs)

    def stab_ratio(self) -> float:
        return self.max_stab / self.n ** (2 / 3) if self.pairs else 0.0


def _finish(sys: SetSystem, pairs) -> Matching:
    hist = stab_counts(sys, pairs)
    return Matching(tuple(pairs), int(hist.max(initial=0)), hist)


def _power_of_two(mult: Fraction) -> int | None:
    if mult.denominator != 1:
        return None
    p = mult.numerator
    return p.bit_length() - 1 if p & (p - 1) == 0 else None


def _pair_costs_limbs(D: np.ndarray, exps: np.ndarray):
    """Exact costs sum_r 2**exps[r] * [row r stabs (u, w)] as base-2**32 limbs.

    Each limb holds rows whose exponent falls in its 32-bit window, scaled
    by at most 2**31, so every float64 partial sum is an integer below 2**53.
    """
    limb_of = exps // LIMB_BITS
    limbs = []
    for k in range(int(limb_of.max(initial=0)) + 1):
        w = np.where(limb_of == k, np.exp2(exps % LIMB_BITS), 0.0)
        a = w @ D
        G = (D * w[:, None]).T @ D
        limbs.append(np.rint(a[:, None] + a[None, :] - 2 * G).astype(np.int64))
    limbs.append(np.zeros_like(limbs[0]))
    for k in range(len(limbs) - 1):
        limbs[k + 1] += limbs[k] >> LIMB_BITS
        limbs[k] &= (1 << LIMB_BITS) - 1
    return limbs


def _pair_costs_exact(D: np.ndarray, counts: np.ndarray, mult: Fraction):
    """Exact costs scaled by q**T for multiplier p/q, as Python ints."""
    p, q = mult.numerator, mult.denominator
    top = int(counts.max(initial=0))
    total = None
    for c in np.unique(counts):
        rows = D[counts == c]
        a = rows.sum(axis=0)
        G = rows.T @ rows
        part = np.rint(a[:, None] + a[None, :] - 2 * G).astype(np.int64).astype(object)
        part = part * (p ** int(c) * q ** (top - int(c)))
        total = part if total is None else total + part
    return total


def low_stab_matching(sys: SetSystem, n: int | None = None, cfg: MatchingConfig | None = None,
                      on_round: Callable | None = None, exact_weights: bool = False) -> Matching:
    """Greedy multiplicative-reweighting matching of ``range(n)``.

    ``on_round(t, pair, counts)`` is called after each round with the
    per-row stabbing counts so far.  ``exact_weights`` forces the
    Python-integer path even when the multiplier is a power of two.
    """
    cfg = cfg or MatchingConfig()
    n = sys.ground_size if n is None else n
    if n != sys.ground_size:
        raise ValueError("matching size differs from the set system's ground size")
    if n % 2:
        raise ValueError("ground size must be even")
    D_all = sys.dense.astype(np.float64)
    # rows that are empty or full never stab a pair
    live = D_all.any(axis=1) & ~D_all.all(axis=1) if len(sys) else np.zeros(0, dtype=bool)
    D = D_all[live]
    counts = np.zeros(len(D), dtype=np.int64)
    shift = _power_of_two(cfg.weight_multiplier)
    alive = np.arange(n)
    pairs = []
    for t in range(n // 2):
        Da = D[:, alive]
        iu, ju = np.triu_indices(len(alive), k=1)
        if len(D) == 0:
            best = 0
        elif shift is not None and not exact_weights:
            limbs = _pair_costs_limbs(Da, counts * shift)
            keys = [np.arange(len(iu))] + [L[iu, ju] for L in limbs]
            best = int(np.lexsort(keys)[0])
        else:
            costs = _pair_costs_exact(Da, counts, cfg.weight_multiplier)[iu, ju]
            best = min(range(len(costs)), key=lambda k: (costs[k], k))
        u, w = int(alive[iu[best]]), int(alive[ju[best]])
        pairs.append((u, w))
        if len(D):
            counts += D[:, u] != D[:, w]
        alive = alive[(alive != u) & (alive != w)]
        if on_round is not None:
            full = np.zeros(len(sys), dtype=np.int64)
            full[live] = counts
            on_round(t, (u, w), full)
    return _finish(sys, pairs)


def row_weights(counts, cfg: MatchingConfig | None = None) -> list[Fraction]:
    """Weight of each row given how often it has been stabbed."""
    mult = (cfg or MatchingConfig()).weight_multiplier
    return [mult ** int(c) for c in counts]


def _perfect_matchings(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, other in enumerate(rest):
        for tail in _perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, other)] + tail


def exhaustive_best_matching(sys: SetSystem, n: int | None = None) -> Matching:
    """Minimize the maximum stabbing number over all (n-1)!! perfect matchings."""
    n = sys.ground_size if n is None else n
    if n > 10:
        raise GroundTooLarge(f"n={n} exceeds the exhaustive limit of 10")
    if n % 2:
        raise ValueError("ground size must be even")
    D = sys.dense
    best, best_val = None, None
    for m in _perfect_matchings(list(range(n))):
        if len(D):
            val = int(sum((D[:, u] != D[:, w]).astype(np.int64) for u, w in m).max())
        else:
            val = 0
        if best_val is None or val < best_val:
            best, best_val = m, val
    return _finish(sys, best)
