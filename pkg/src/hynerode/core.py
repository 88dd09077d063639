"""Hypergraphs, colored graphs, derived graphs, and an exact isomorphism test."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Hashable, Iterable, Mapping

Vertex = Hashable

# Backtracking isomorphism is only meant for desk-scale instances.
MAX_ISO_VERTICES = 12
MAX_ISO_NODES = 40


class InstanceTooLarge(ValueError):
    """Raised when an exact (exponential) routine is asked to do too much."""


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """A vertex tuple plus an ordered list of hyperedges.

    Hyperedges form a multiset: duplicates, singletons and empty hyperedges
    are all allowed.  Equality ignores hyperedge order but respects
    multiplicity.
    """

    vertices: tuple = ()
    edges: tuple = ()

    def __post_init__(self):
        vertices = tuple(self.vertices)
        edges = tuple(frozenset(e) for e in self.edges)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex identifiers must be pairwise distinct")
        vset = set(vertices)
        for i, e in enumerate(edges):
            if not e <= vset:
                raise ValueError(f"hyperedge {i} uses unknown vertices {sorted(map(str, e - vset))}")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return set(self.vertices) == set(other.vertices) and Counter(self.edges) == Counter(other.edges)

    def __hash__(self):
        return hash((frozenset(self.vertices), frozenset(Counter(self.edges).items())))

    def __repr__(self):
        edges = ", ".join("{" + ",".join(sorted(map(str, e))) + "}" for e in self.edges)
        return f"Hypergraph(n={self.n}, edges=[{edges}])"

    def without_edges(self, indices: Iterable[int]) -> Hypergraph:
        drop = set(indices)
        return Hypergraph(self.vertices, [e for i, e in enumerate(self.edges) if i not in drop])

    def rename(self, mapping: Mapping) -> Hypergraph:
        return Hypergraph([mapping[v] for v in self.vertices], [{mapping[v] for v in e} for e in self.edges])

    def dedup(self) -> Hypergraph:
        """Same hypergraph with duplicate hyperedges collapsed (first occurrence kept)."""
        seen, edges = set(), []
        for e in self.edges:
            if e not in seen:
                seen.add(e)
                edges.append(e)
        return Hypergraph(self.vertices, edges)


@dataclass(frozen=True, eq=False)
class ColoredGraph:
    """A simple graph whose vertices carry colors 1..c_max.

    ``color`` may be omitted, in which case every vertex gets color 1 (a
    plain graph).
    """

    vertices: tuple = ()
    edges: frozenset = frozenset()
    color: Mapping = field(default=None)

    def __post_init__(self):
        vertices = tuple(self.vertices)
        if len(set(vertices)) != len(vertices):
            raise ValueError("vertex identifiers must be pairwise distinct")
        vset = set(vertices)
        edges = set()
        for e in self.edges:
            e = frozenset(e)
            if len(e) != 2:
                raise ValueError(f"edge {sorted(map(str, e))} is a self-loop or not binary")
            if not e <= vset:
                raise ValueError(f"edge {sorted(map(str, e))} references unknown vertices")
            edges.add(e)
        color = {v: 1 for v in vertices} if self.color is None else dict(self.color)
        if set(color) != vset:
            raise ValueError("every vertex needs exactly one color")
        if any(not isinstance(c, int) or c < 1 for c in color.values()):
            raise ValueError("colors are integers >= 1")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", frozenset(edges))
        object.__setattr__(self, "color", color)

    @property
    def c_max(self) -> int:
        return max(self.color.values(), default=1)

    def adjacency(self) -> dict:
        adj = {v: set() for v in self.vertices}
        for e in self.edges:
            u, w = tuple(e)
            adj[u].add(w)
            adj[w].add(u)
        return adj

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (
            set(self.vertices) == set(other.vertices)
            and self.edges == other.edges
            and self.color == other.color
        )

    __hash__ = None

    def __repr__(self):
        return f"ColoredGraph(n={len(self.vertices)}, m={len(self.edges)}, c_max={self.c_max})"


def graph(vertices, edges) -> ColoredGraph:
    """A plain graph, i.e. a colored graph with a single color."""
    return ColoredGraph(vertices, edges)


def vnode(v):
    """Name of the incidence-graph node standing for vertex ``v``."""
    return ("v", v)


def enode(i: int):
    """Name of the incidence-graph node standing for hyperedge ordinal ``i``."""
    return ("e", i)


def incidence_graph(h: Hypergraph) -> ColoredGraph:
    """Bipartite membership graph: vertices get color 1, hyperedges color 2."""
    nodes = [vnode(v) for v in h.vertices] + [enode(i) for i in range(h.m)]
    color = {vnode(v): 1 for v in h.vertices}
    color.update({enode(i): 2 for i in range(h.m)})
    edges = [(vnode(v), enode(i)) for i, e in enumerate(h.edges) for v in e]
    return ColoredGraph(nodes, edges, color)


def primal_graph(h: Hypergraph) -> ColoredGraph:
    edges = {frozenset(p) for e in h.edges for p in combinations(e, 2)}
    return graph(h.vertices, edges)


# -- isomorphism ---------------------------------------------------------------


def colored_isomorphism(g1: ColoredGraph, g2: ColoredGraph, fixed: Mapping | None = None):
    """A color-preserving isomorphism g1 -> g2 as a dict, or None.

    ``fixed`` pins some vertices of g1 to prescribed images (used to demand
    that boundary labels are respected).
    """
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return None
    if len(g1.vertices) > MAX_ISO_NODES:
        raise InstanceTooLarge("instance too large for exact isomorphism")
    if Counter(g1.color.values()) != Counter(g2.color.values()):
        return None
    fixed = dict(fixed or {})
    # Pinned vertices get unique seed classes, matched up across the graphs.
    seed1 = {v: (g1.color[v], None) for v in g1.vertices}
    seed2 = {v: (g2.color[v], None) for v in g2.vertices}
    for idx, (u, w) in enumerate(sorted(fixed.items(), key=lambda p: repr(p))):
        if g1.color[u] != g2.color[w]:
            return None
        seed1[u] = (g1.color[u], idx)
        seed2[w] = (g2.color[w], idx)
    c1, c2 = _joint_refine(g1, g2, seed1, seed2)
    if c1 is None or Counter(c1.values()) != Counter(c2.values()):
        return None
    adj1, adj2 = g1.adjacency(), g2.adjacency()
    by_class = {}
    for w in g2.vertices:
        by_class.setdefault(c2[w], []).append(w)
    # Most constrained vertices first, neighbors of mapped vertices early.
    order = sorted(g1.vertices, key=lambda v: (len(by_class[c1[v]]), -len(adj1[v])))
    order = _bfs_order(order, adj1)
    mapping, used = {}, set()

    def extend(pos):
        if pos == len(order):
            return True
        v = order[pos]
        for w in by_class[c1[v]]:
            if w in used:
                continue
            ok = True
            for u in adj1[v]:
                if u in mapping and mapping[u] not in adj2[w]:
                    ok = False
                    break
            if ok:
                mapped_nbrs = sum(1 for u in adj1[v] if u in mapping)
                if mapped_nbrs != sum(1 for x in adj2[w] if x in used):
                    ok = False
            if not ok:
                continue
            mapping[v] = w
            used.add(w)
            if extend(pos + 1):
                return True
            del mapping[v]
            used.discard(w)
        return False

    return dict(mapping) if extend(0) else None


def _bfs_order(order, adj):
    rank = {v: i for i, v in enumerate(order)}
    seen, out = set(), []
    for start in order:
        if start in seen:
            continue
        frontier = [start]
        seen.add(start)
        while frontier:
            frontier.sort(key=rank.get)
            v = frontier.pop(0)
            out.append(v)
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    frontier.append(w)
    return out


def _joint_refine(g1, g2, seed1, seed2):
    """Refine both graphs with a shared class vocabulary."""
    adj1, adj2 = g1.adjacency(), g2.adjacency()
    c1, c2 = dict(seed1), dict(seed2)
    for _ in range(len(g1.vertices) + 1):
        s1 = {v: (c1[v], tuple(sorted(Counter(c1[w] for w in adj1[v]).items(), key=repr))) for v in g1.vertices}
        s2 = {v: (c2[v], tuple(sorted(Counter(c2[w] for w in adj2[v]).items(), key=repr))) for v in g2.vertices}
        vocab = {s: i for i, s in enumerate(sorted(set(s1.values()) | set(s2.values()), key=repr))}
        n1, n2 = {v: vocab[s1[v]] for v in s1}, {v: vocab[s2[v]] for v in s2}
        if Counter(n1.values()) != Counter(n2.values()):
            return None, None
        stable = len(set(n1.values())) == len(set(c1.values()))
        c1, c2 = n1, n2
        if stable:
            break
    return c1, c2


def colored_isomorphic(g1: ColoredGraph, g2: ColoredGraph) -> bool:
    return colored_isomorphism(g1, g2) is not None


def isomorphic(h1: Hypergraph, h2: Hypergraph) -> bool:
    """Multiplicity-preserving hypergraph isomorphism.

    Decided on the two-colored incidence graphs, which are color-isomorphic
    exactly when the hypergraphs are (duplicate hyperedges become twin
    hyperedge nodes).
    """
    if max(h1.n, h2.n) > MAX_ISO_VERTICES:
        raise InstanceTooLarge("instance too large for exact isomorphism")
    if h1.n != h2.n or h1.m != h2.m:
        return False
    if Counter(map(len, h1.edges)) != Counter(map(len, h2.edges)):
        return False
    return colored_isomorphic(incidence_graph(h1), incidence_graph(h2))
