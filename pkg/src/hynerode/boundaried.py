"""Boundaried colored graphs and hypergraphs, gluing, and the H(.) lift."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping

from .core import ColoredGraph, Hypergraph, InstanceTooLarge, colored_isomorphism, enode, incidence_graph, vnode


class GlueError(ValueError):
    """Two boundaried objects cannot be glued."""


def _fresh(name, taken):
    k = 1
    cand = name
    while cand in taken:
        # string names stay strings so renamed vertices print cleanly
        cand = f"{name}.{k}" if isinstance(name, str) else (name, k)
        k += 1
    return cand


@dataclass(frozen=True, eq=False)
class BoundariedColoredGraph:
    """A colored graph whose labels 1..t sit on t distinct vertices."""

    graph: ColoredGraph
    label: Mapping = field(default_factory=dict)

    def __post_init__(self):
        label = dict(self.label)
        if sorted(label) != list(range(1, len(label) + 1)):
            raise ValueError(f"labels must be exactly 1..t, got {sorted(label)}")
        if len(set(label.values())) != len(label):
            raise ValueError("boundary labels must sit on distinct vertices")
        vs = set(self.graph.vertices)
        if any(v not in vs for v in label.values()):
            raise ValueError("boundary label on an unknown vertex")
        object.__setattr__(self, "label", label)

    @property
    def t(self) -> int:
        return len(self.label)

    @property
    def boundary(self) -> frozenset:
        return frozenset(self.label.values())

    def label_of(self, v):
        for lab, w in self.label.items():
            if w == v:
                return lab
        return None

    def __eq__(self, other):
        if not isinstance(other, BoundariedColoredGraph):
            return NotImplemented
        return self.graph == other.graph and self.label == other.label

    __hash__ = None


def boundaried_isomorphic(g1: BoundariedColoredGraph, g2: BoundariedColoredGraph) -> bool:
    """Color isomorphism that maps each label to the same label."""
    if g1.t != g2.t:
        return False
    fixed = {g1.label[i]: g2.label[i] for i in g1.label}
    return colored_isomorphism(g1.graph, g2.graph, fixed) is not None


def glue_graphs(g1: BoundariedColoredGraph, g2: BoundariedColoredGraph) -> BoundariedColoredGraph:
    """Disjoint union identifying equally labeled boundary vertices.

    Vertex names of g1 are kept; non-boundary vertices of g2 keep their
    names unless they collide, in which case they get fresh names.
    The result carries g1's boundary labels.
    """
    if g1.t != g2.t:
        raise GlueError(f"boundary sizes differ ({g1.t} vs {g2.t})")
    for lab in g1.label:
        c1 = g1.graph.color[g1.label[lab]]
        c2 = g2.graph.color[g2.label[lab]]
        if c1 != c2:
            raise GlueError(f"label {lab} has color {c1} on one side and {c2} on the other")
    rename = {g2.label[lab]: g1.label[lab] for lab in g2.label}
    taken = set(g1.graph.vertices)
    for v in g2.graph.vertices:
        if v not in rename:
            rename[v] = _fresh(v, taken)
            taken.add(rename[v])
    vertices = list(g1.graph.vertices) + [rename[v] for v in g2.graph.vertices if v not in g2.boundary]
    color = dict(g1.graph.color)
    color.update({rename[v]: c for v, c in g2.graph.color.items()})
    edges = set(g1.graph.edges) | {frozenset(rename[v] for v in e) for e in g2.graph.edges}
    return BoundariedColoredGraph(ColoredGraph(vertices, edges, color), dict(g1.label))


@dataclass(frozen=True, eq=False)
class BoundariedHypergraph:
    """A hypergraph with labeled boundary vertices and hyperedges.

    ``vlabel`` maps labels to vertices and ``elabel`` maps labels to
    hyperedge ordinals.  Labels are distinct positive integers; the two
    domains are disjoint.
    """

    hypergraph: Hypergraph
    vlabel: Mapping = field(default_factory=dict)
    elabel: Mapping = field(default_factory=dict)

    def __post_init__(self):
        vlabel, elabel = dict(self.vlabel), dict(self.elabel)
        if set(vlabel) & set(elabel):
            raise ValueError(f"labels {sorted(set(vlabel) & set(elabel))} used for both a vertex and a hyperedge")
        for lab in list(vlabel) + list(elabel):
            if not isinstance(lab, int) or lab < 1:
                raise ValueError(f"label {lab!r} is not a positive integer")
        if len(set(vlabel.values())) != len(vlabel):
            raise ValueError("two labels on the same vertex")
        if len(set(elabel.values())) != len(elabel):
            raise ValueError("two labels on the same hyperedge")
        vs = set(self.hypergraph.vertices)
        if any(v not in vs for v in vlabel.values()):
            raise ValueError("vertex label on an unknown vertex")
        if any(not (isinstance(i, int) and 0 <= i < self.hypergraph.m) for i in elabel.values()):
            raise ValueError("hyperedge label on an unknown hyperedge ordinal")
        object.__setattr__(self, "vlabel", vlabel)
        object.__setattr__(self, "elabel", elabel)

    @property
    def labels(self) -> frozenset:
        return frozenset(self.vlabel) | frozenset(self.elabel)

    @property
    def t(self) -> int:
        return len(self.labels)

    @property
    def boundary_vertices(self) -> frozenset:
        return frozenset(self.vlabel.values())

    @property
    def vertices(self):
        return self.hypergraph.vertices

    @property
    def edges(self):
        return self.hypergraph.edges

    def edge_label(self, i: int):
        for lab, j in self.elabel.items():
            if j == i:
                return lab
        return None

    def vertex_label(self, v):
        for lab, w in self.vlabel.items():
            if w == v:
                return lab
        return None

    def free_vertices(self) -> list:
        b = self.boundary_vertices
        return [v for v in self.hypergraph.vertices if v not in b]

    def _labeled_edges(self):
        inv = {i: lab for lab, i in self.elabel.items()}
        return Counter((e, inv.get(i)) for i, e in enumerate(self.hypergraph.edges))

    def __eq__(self, other):
        if not isinstance(other, BoundariedHypergraph):
            return NotImplemented
        return (
            set(self.hypergraph.vertices) == set(other.hypergraph.vertices)
            and self.vlabel == other.vlabel
            and self._labeled_edges() == other._labeled_edges()
        )

    __hash__ = None

    def __repr__(self):
        return f"BoundariedHypergraph({self.hypergraph!r}, vlabel={self.vlabel}, elabel={self.elabel})"


def gluable(h1: BoundariedHypergraph, h2: BoundariedHypergraph) -> bool:
    return not (set(h1.vlabel) & set(h2.elabel) or set(h1.elabel) & set(h2.vlabel))


def glue_hypergraphs(h1: BoundariedHypergraph, h2: BoundariedHypergraph) -> BoundariedHypergraph:
    """Identify equally labeled vertices and union equally labeled hyperedges.

    Labels present on only one side stay on the boundary of the result.
    """
    clash = (set(h1.vlabel) & set(h2.elabel)) | (set(h1.elabel) & set(h2.vlabel))
    if clash:
        raise GlueError(f"labels {sorted(clash)} name a vertex on one side and a hyperedge on the other")
    rename = {h2.vlabel[lab]: h1.vlabel[lab] for lab in h2.vlabel if lab in h1.vlabel}
    taken = set(h1.hypergraph.vertices)
    vertices = list(h1.hypergraph.vertices)
    for v in h2.hypergraph.vertices:
        if v not in rename:
            rename[v] = _fresh(v, taken)
            taken.add(rename[v])
            vertices.append(rename[v])
    vlabel = dict(h1.vlabel)
    vlabel.update({lab: rename[v] for lab, v in h2.vlabel.items()})

    edges = [set(e) for e in h1.hypergraph.edges]
    elabel = dict(h1.elabel)
    shared = {h2.elabel[lab]: h1.elabel[lab] for lab in h2.elabel if lab in h1.elabel}
    inv2 = {i: lab for lab, i in h2.elabel.items()}
    for i, e in enumerate(h2.hypergraph.edges):
        mapped = {rename[v] for v in e}
        if i in shared:
            edges[shared[i]] |= mapped
        else:
            if i in inv2:
                elabel[inv2[i]] = len(edges)
            edges.append(mapped)
    return BoundariedHypergraph(Hypergraph(vertices, edges), vlabel, elabel)


def hypergraph_of(g: BoundariedColoredGraph) -> BoundariedHypergraph:
    """Color-1 nodes become vertices, each color-2 node its neighborhood."""
    col = g.graph.color
    if any(c not in (1, 2) for c in col.values()):
        raise ValueError("the lift needs a graph colored with 1 and 2 only")
    for e in g.graph.edges:
        u, w = tuple(e)
        if col[u] == col[w]:
            raise ValueError(f"nodes {u!r} and {w!r} share color {col[u]} but are adjacent")
    adj = g.graph.adjacency()
    vertices = [v for v in g.graph.vertices if col[v] == 1]
    hnodes = [w for w in g.graph.vertices if col[w] == 2]
    edges = [adj[w] for w in hnodes]
    index = {w: i for i, w in enumerate(hnodes)}
    vlabel, elabel = {}, {}
    for lab, v in g.label.items():
        if col[v] == 1:
            vlabel[lab] = v
        else:
            elabel[lab] = index[v]
    return BoundariedHypergraph(Hypergraph(vertices, edges), vlabel, elabel)


def incidence_of(h: BoundariedHypergraph) -> BoundariedColoredGraph:
    """Two-colored incidence graph carrying the hypergraph's labels.

    Requires the labels to be exactly 1..t.
    """
    label = {lab: vnode(v) for lab, v in h.vlabel.items()}
    label.update({lab: enode(i) for lab, i in h.elabel.items()})
    return BoundariedColoredGraph(incidence_graph(h.hypergraph), label)


def boundaried_hypergraph_isomorphic(h1: BoundariedHypergraph, h2: BoundariedHypergraph, limit: int = 40) -> bool:
    """Isomorphism that preserves every vertex and hyperedge label."""
    if set(h1.vlabel) != set(h2.vlabel) or set(h1.elabel) != set(h2.elabel):
        return False
    if h1.hypergraph.n != h2.hypergraph.n or h1.hypergraph.m != h2.hypergraph.m:
        return False
    if h1.hypergraph.n + h1.hypergraph.m > limit:
        raise InstanceTooLarge("instance too large for exact isomorphism")
    fixed = {vnode(v): vnode(h2.vlabel[lab]) for lab, v in h1.vlabel.items()}
    fixed.update({enode(i): enode(h2.elabel[lab]) for lab, i in h1.elabel.items()})
    return colored_isomorphism(incidence_graph(h1.hypergraph), incidence_graph(h2.hypergraph), fixed) is not None
