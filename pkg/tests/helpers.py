"""Random generators and exhaustive enumerators shared by the test modules."""

from __future__ import annotations

import itertools
import random

from hynerode.boundaried import BoundariedColoredGraph, BoundariedHypergraph, boundaried_hypergraph_isomorphic
from hynerode.core import ColoredGraph, Hypergraph
from hynerode.layout import decide_cutwidth


def random_hypergraph(rng: random.Random, max_v: int, max_e: int, min_v: int = 1) -> Hypergraph:
    n = rng.randint(min_v, max_v)
    vs = [f"v{i}" for i in range(1, n + 1)]
    edges = []
    for _ in range(rng.randint(0, max_e)):
        size = rng.randint(0, min(n, 4))
        edges.append(set(rng.sample(vs, size)))
    return Hypergraph(vs, edges)


def random_colored_graph(rng: random.Random, max_v: int, colors: int = 2, p: float | None = None) -> ColoredGraph:
    n = rng.randint(1, max_v)
    vs = list(range(n))
    p = rng.uniform(0.1, 0.7) if p is None else p
    edges = [{u, w} for u, w in itertools.combinations(vs, 2) if rng.random() < p]
    return ColoredGraph(vs, edges, {v: rng.randint(1, colors) for v in vs})


def random_boundaried(rng: random.Random, kinds: dict, free: int, extra_edges: int, prefix: str) -> BoundariedHypergraph:
    """Boundaried hypergraph whose label ``lab`` is a vertex if kinds[lab] == 'v', else a hyperedge."""
    vs, vlabel = [], {}
    for lab, kind in sorted(kinds.items()):
        if kind == "v":
            vlabel[lab] = f"{prefix}b{lab}"
            vs.append(vlabel[lab])
    vs += [f"{prefix}{i}" for i in range(free)]
    edges, elabel = [], {}
    for lab, kind in sorted(kinds.items()):
        if kind == "e":
            elabel[lab] = len(edges)
            edges.append({v for v in vs if rng.random() < 0.4})
    for _ in range(extra_edges):
        if vs:
            edges.append(set(rng.sample(vs, rng.randint(1, min(3, len(vs))))))
    return BoundariedHypergraph(Hypergraph(vs, edges), vlabel, elabel)


def random_gluable_pair(rng: random.Random, max_vertices: int = 8):
    """Two boundaried hypergraphs with matching label kinds whose gluing has at most ``max_vertices`` vertices."""
    while True:
        t = rng.randint(1, 3)
        kinds = {lab: rng.choice("ve") for lab in range(1, t + 1)}
        shared = sum(1 for x in kinds.values() if x == "v")
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        if shared + a + b > max_vertices or shared + b == 0:
            continue
        g = random_boundaried(rng, kinds, a, rng.randint(0, 3), "g")
        h = random_boundaried(rng, kinds, b, rng.randint(0, 3), "h")
        return g, h


def graph_for_test(rng: random.Random, test, free: int, extra_edges: int) -> BoundariedHypergraph:
    """Random G that can be checked against ``test``: its vertex labels are
    the test's position labels, its hyperedge labels a subset of the rest."""
    labels = set(test.pi) | set(test.edge_labels())
    kinds = {lab: "v" for lab in test.pi}
    for lab in labels - set(test.pi):
        if rng.random() < 0.7:
            kinds[lab] = "e"
    return random_boundaried(rng, kinds, free, extra_edges, "g")


def boundaried_family(kinds: dict, max_free: int, k: int) -> list:
    """Every boundaried hypergraph with the given label kinds, at most
    ``max_free`` unlabeled vertices and cutwidth at most ``k``.

    Unlabeled hyperedges have at least two members and are pairwise
    distinct; labeled hyperedges are arbitrary vertex subsets.
    """
    vlabs = [lab for lab in sorted(kinds) if kinds[lab] == "v"]
    elabs = [lab for lab in sorted(kinds) if kinds[lab] == "e"]
    out = []
    for f in range(max_free + 1):
        vs = [f"b{lab}" for lab in vlabs] + [f"x{i}" for i in range(1, f + 1)]
        subsets = [frozenset(c) for r in range(len(vs) + 1) for c in itertools.combinations(vs, r)]
        big = [s for s in subsets if len(s) >= 2]
        vlabel = {lab: f"b{lab}" for lab in vlabs}
        elabel = {lab: i for i, lab in enumerate(elabs)}
        for labeled in itertools.product(subsets, repeat=len(elabs)):
            stack = [(0, [])]
            while stack:
                start, chosen = stack.pop()
                hg = Hypergraph(vs, list(labeled) + chosen)
                # adding hyperedges never lowers cutwidth, so prune here
                if not decide_cutwidth(hg, k):
                    continue
                out.append(BoundariedHypergraph(hg, vlabel, elabel))
                stack.extend((j + 1, chosen + [big[j]]) for j in range(start, len(big)))
    return out


def up_to_isomorphism(graphs: list) -> list:
    reps, buckets = [], {}
    for g in graphs:
        key = (g.hypergraph.n, g.hypergraph.m, tuple(sorted(len(e) for e in g.hypergraph.edges)))
        bucket = buckets.setdefault(key, [])
        if not any(boundaried_hypergraph_isomorphic(g, r) for r in bucket):
            bucket.append(g)
            reps.append(g)
    return reps


def colored(g: ColoredGraph) -> BoundariedColoredGraph:
    return BoundariedColoredGraph(g)
