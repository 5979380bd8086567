"""Slow, obviously-correct reference implementations used only by tests."""

from __future__ import annotations

import itertools
import math
from functools import lru_cache


def brute_edit_distance(a: str, b: str) -> int:
    @lru_cache(maxsize=None)
    def go(i, j):
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        return min(
            go(i + 1, j) + 1,
            go(i, j + 1) + 1,
            go(i + 1, j + 1) + (a[i] != b[j]),
        )

    return go(0, 0)


def _similarity(a, b):
    if a == b:
        return 1.0
    return 1.0 - brute_edit_distance(a, b) / max(len(a), len(b))


def monotone_alignments(n: int, m: int):
    """Every set of non-crossing (i, j) pairs, i.e. every token edit script."""
    for k in range(min(n, m) + 1):
        for rows in itertools.combinations(range(n), k):
            for cols in itertools.combinations(range(m), k):
                yield list(zip(rows, cols))


def brute_script_cost(sub, ent, insert_costs, delete_costs, tau):
    """Minimum over all edit scripts; each script's cost is summed with fsum."""
    best = math.inf
    for pairs in monotone_alignments(len(sub), len(ent)):
        costs = []
        ok = True
        for i, j in pairs:
            if sub[i] == ent[j]:
                continue
            sim = _similarity(sub[i], ent[j])
            if sim < tau:
                ok = False
                break
            costs.append(insert_costs[j] * (1.0 - sim))
        if not ok:
            continue
        used_i = {i for i, _ in pairs}
        used_j = {j for _, j in pairs}
        costs += [delete_costs[i] for i in range(len(sub)) if i not in used_i]
        costs += [insert_costs[j] for j in range(len(ent)) if j not in used_j]
        best = min(best, math.fsum(costs))
    return best


def concordance(scores_pos, scores_neg) -> float:
    """P(random positive outscores random negative), ties counted as 1/2."""
    total = 0.0
    for p in scores_pos:
        for q in scores_neg:
            total += 1.0 if p > q else 0.5 if p == q else 0.0
    return total / (len(scores_pos) * len(scores_neg))


def ngram_counts_by_enumeration(lines, order):
    counts = {}
    for toks in lines:
        for i in range(len(toks)):
            for j in range(i + 1, min(len(toks), i + order) + 1):
                g = tuple(toks[i:j])
                counts[g] = counts.get(g, 0) + 1
    return counts
