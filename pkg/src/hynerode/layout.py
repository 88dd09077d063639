"""Linear layouts, cuts and exact cutwidth."""

from __future__ import annotations

from itertools import permutations
from typing import Mapping

from .core import Hypergraph, InstanceTooLarge

MAX_DP_VERTICES = 20
MAX_PERMUTATION_VERTICES = 9


def check_layout(h: Hypergraph, l: Mapping) -> None:
    if set(l) != set(h.vertices):
        raise ValueError("layout must place exactly the hypergraph's vertices")
    if len(set(l.values())) != len(l):
        raise ValueError("layout positions must be distinct")


def cut_at(h: Hypergraph, l: Mapping, i) -> frozenset:
    """Ordinals of hyperedges with a member strictly left and one strictly right of ``i``."""
    out = []
    for j, e in enumerate(h.edges):
        if any(l[v] < i for v in e) and any(l[v] > i for v in e):
            out.append(j)
    return frozenset(out)


def gap_points(l: Mapping) -> list:
    """One representative point strictly inside every gap between consecutive positions."""
    pos = sorted(l.values())
    return [(a + b) / 2 for a, b in zip(pos, pos[1:])]


def cutwidth_of_layout(h: Hypergraph, l: Mapping) -> int:
    check_layout(h, l)
    return max((len(cut_at(h, l, x)) for x in gap_points(l)), default=0)


def order_to_layout(order) -> dict:
    return {v: i for i, v in enumerate(order, start=1)}


def _edge_masks(h: Hypergraph, index: Mapping) -> list:
    masks = []
    for e in h.edges:
        if len(e) >= 2:
            m = 0
            for v in e:
                m |= 1 << index[v]
            masks.append(m)
    return masks


def cutwidth_exact(h: Hypergraph) -> tuple[int, dict]:
    """Optimal cutwidth with a witness layout onto 1..n.

    Subset dynamic program: the cut after a prefix set P is the set of
    hyperedges meeting both P and its complement.  ``best[P]`` is the
    smallest achievable maximum cut over all completions of P.  The
    witness is the lexicographically smallest optimal order with respect
    to the hypergraph's vertex order.
    """
    n = h.n
    if n > MAX_DP_VERTICES:
        raise InstanceTooLarge(f"cutwidth_exact handles at most {MAX_DP_VERTICES} vertices, got {n}")
    index = {v: i for i, v in enumerate(h.vertices)}
    masks = _edge_masks(h, index)
    full = (1 << n) - 1
    cut = [0] * (full + 1)
    for p in range(full + 1):
        c = 0
        for m in masks:
            x = p & m
            if x and x != m:
                c += 1
        cut[p] = c
    best = [0] * (full + 1)
    for p in range(full - 1, -1, -1):
        rest = full & ~p
        b = None
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = best[p | bit]
            if b is None or v < b:
                b = v
        best[p] = max(cut[p], b)
    order, p = [], 0
    while p != full:
        for i in range(n):
            bit = 1 << i
            if not p & bit and max(cut[p], best[p | bit]) == best[p]:
                order.append(h.vertices[i])
                p |= bit
                break
    return best[0], order_to_layout(order)


def cutwidth_by_permutations(h: Hypergraph) -> tuple[int, dict]:
    """Reference oracle: scan all n! vertex orders."""
    if h.n > MAX_PERMUTATION_VERTICES:
        raise InstanceTooLarge(f"permutation scan handles at most {MAX_PERMUTATION_VERTICES} vertices")
    best = None
    for order in permutations(h.vertices):
        l = order_to_layout(order)
        w = cutwidth_of_layout(h, l)
        if best is None or w < best[0]:
            best = (w, l)
    return best if best is not None else (0, {})


def decide_cutwidth(h: Hypergraph, k: int) -> bool:
    """Is the cutwidth at most k?

    Explores only prefix sets whose cut stays within k, which is far
    cheaper than the full table when k is small.
    """
    n = h.n
    if n > MAX_DP_VERTICES:
        raise InstanceTooLarge(f"decide_cutwidth handles at most {MAX_DP_VERTICES} vertices, got {n}")
    if k < 0:
        return False
    index = {v: i for i, v in enumerate(h.vertices)}
    masks = _edge_masks(h, index)
    full = (1 << n) - 1

    def cut(p):
        c = 0
        for m in masks:
            x = p & m
            if x and x != m:
                c += 1
        return c

    seen = {0}
    stack = [0]
    while stack:
        p = stack.pop()
        if p == full:
            return True
        rest = full & ~p
        while rest:
            bit = rest & -rest
            rest ^= bit
            q = p | bit
            if q not in seen:
                seen.add(q)
                if cut(q) <= k:
                    stack.append(q)
    return False
