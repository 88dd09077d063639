"""Tree decompositions: validation, width, exact treewidth and the
layout-to-incidence-decomposition transform."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Mapping

from .core import ColoredGraph, Hypergraph, InstanceTooLarge, enode, vnode
from .layout import check_layout, cut_at

MAX_TW_VERTICES = 18
MAX_ELIMINATION_SCAN = 10


@dataclass(frozen=True, eq=False)
class TreeDecomposition:
    """Bags on a tree.  ``tree_edges`` joins node ids; ``root`` defaults to the first node."""

    bags: Mapping
    tree_edges: tuple = ()
    root: object = field(default=None)

    def __post_init__(self):
        bags = {b: frozenset(v) for b, v in dict(self.bags).items()}
        edges = tuple((a, b) for a, b in self.tree_edges)
        for a, b in edges:
            if a not in bags or b not in bags:
                raise ValueError(f"tree edge {a!r}-{b!r} references an unknown node")
        root = self.root
        if root is None and bags:
            root = next(iter(bags))
        if root is not None and root not in bags:
            raise ValueError("root is not a node of the decomposition")
        object.__setattr__(self, "bags", bags)
        object.__setattr__(self, "tree_edges", edges)
        object.__setattr__(self, "root", root)

    @property
    def nodes(self) -> list:
        return list(self.bags)

    def neighbors(self) -> dict:
        adj = {b: [] for b in self.bags}
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def children(self, root=None) -> dict:
        """Child lists after rooting at ``root`` (default: the stored root)."""
        root = self.root if root is None else root
        adj = self.neighbors()
        kids = {b: [] for b in self.bags}
        seen = {root}
        stack = [root]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    kids[x].append(y)
                    stack.append(y)
        return kids


@dataclass(frozen=True)
class Validation:
    ok: bool
    condition: str | None = None
    witness: object = None
    message: str = ""

    def __bool__(self):
        return self.ok


def _is_tree(td: TreeDecomposition) -> bool:
    nodes = td.nodes
    if not nodes:
        return True
    if len(td.tree_edges) != len(nodes) - 1:
        return False
    adj = td.neighbors()
    seen = {nodes[0]}
    stack = [nodes[0]]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(nodes)


def validate(td: TreeDecomposition, g: ColoredGraph) -> Validation:
    """Check the three tree-decomposition conditions, reporting the first failure."""
    if not _is_tree(td):
        return Validation(False, "tree", None, "the bags are not arranged on a tree")
    vs = set(g.vertices)
    for b, bag in td.bags.items():
        extra = bag - vs
        if extra:
            return Validation(False, "bags", b, f"bag {b!r} holds unknown vertices")
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in g.vertices:
        if v not in covered:
            return Validation(False, "(i)", v, f"vertex {v!r} is in no bag")
    for e in sorted(g.edges, key=repr):
        if not any(e <= bag for bag in td.bags.values()):
            return Validation(False, "(ii)", tuple(sorted(e, key=repr)), f"edge {sorted(e, key=repr)} is in no bag")
    adj = td.neighbors()
    for v in g.vertices:
        holding = [b for b, bag in td.bags.items() if v in bag]
        seen = {holding[0]}
        stack = [holding[0]]
        while stack:
            for y in adj[stack.pop()]:
                if y not in seen and v in td.bags[y]:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(holding):
            return Validation(False, "(iii)", v, f"bags holding {v!r} are not connected")
    return Validation(True)


def width(td: TreeDecomposition) -> int:
    if not td.bags:
        raise ValueError("width of an empty decomposition is undefined")
    return max(len(b) for b in td.bags.values()) - 1


# -- exact treewidth -------------------------------------------------------------


def _adjacency_masks(g: ColoredGraph):
    idx = {v: i for i, v in enumerate(g.vertices)}
    adj = [0] * len(g.vertices)
    for e in g.edges:
        u, w = tuple(e)
        adj[idx[u]] |= 1 << idx[w]
        adj[idx[w]] |= 1 << idx[u]
    return adj


def _q(adj, s: int, v: int) -> int:
    """Vertices outside s and v reachable from v through s (the fill neighborhood)."""
    reach, frontier = 1 << v, 1 << v
    out = 0
    while frontier:
        nxt = 0
        f = frontier
        while f:
            bit = f & -f
            f ^= bit
            nxt |= adj[bit.bit_length() - 1]
        nxt &= ~reach
        reach |= nxt
        out |= nxt & ~s
        frontier = nxt & s
    return out


def _feasible_order(adj, n: int, k: int):
    """An elimination order whose fill neighborhoods all have size <= k, or None."""
    full = (1 << n) - 1
    parent = {0: None}
    stack = [0]
    while stack:
        s = stack.pop()
        if s == full:
            order = []
            while parent[s] is not None:
                prev, v = parent[s]
                order.append(v)
                s = prev
            return order[::-1]
        rest = full & ~s
        # Pushing in reverse keeps the lowest-index choice on top of the stack.
        choices = []
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            t = s | bit
            if t not in parent and bin(_q(adj, s, v)).count("1") <= k:
                choices.append((t, v))
        for t, v in reversed(choices):
            if t not in parent:
                parent[t] = (s, v)
                stack.append(t)
    return None


def decomposition_from_order(g: ColoredGraph, order) -> TreeDecomposition:
    """Tree decomposition induced by an elimination order."""
    vertices = list(g.vertices)
    idx = {v: i for i, v in enumerate(vertices)}
    adj = _adjacency_masks(g)
    pos = {v: i for i, v in enumerate(order)}
    s = 0
    bags, parent = {}, {}
    for j, v in enumerate(order):
        q = _q(adj, s, idx[v])
        members = [vertices[i] for i in range(len(vertices)) if q >> i & 1]
        bags[j] = frozenset([v] + members)
        if members:
            parent[j] = min(pos[u] for u in members)
        s |= 1 << idx[v]
    roots = [j for j in bags if j not in parent]
    edges = [(j, p) for j, p in parent.items()]
    # Disconnected graphs give a forest; chaining the roots keeps it valid.
    edges += list(zip(roots, roots[1:]))
    if not bags:
        return TreeDecomposition({0: frozenset()})
    return TreeDecomposition(bags, edges, root=roots[-1])


def _degeneracy(adj, n) -> int:
    alive = (1 << n) - 1
    best = 0
    while alive:
        v = min((i for i in range(n) if alive >> i & 1), key=lambda i: bin(adj[i] & alive).count("1"))
        best = max(best, bin(adj[v] & alive).count("1"))
        alive &= ~(1 << v)
    return best


def treewidth_exact(g: ColoredGraph) -> tuple[int, TreeDecomposition]:
    """Optimal treewidth with a witness decomposition.

    Searches elimination orders for increasing k, keeping only prefixes
    whose every fill neighborhood has at most k vertices.
    """
    n = len(g.vertices)
    if n > MAX_TW_VERTICES:
        raise InstanceTooLarge(f"treewidth_exact handles at most {MAX_TW_VERTICES} vertices, got {n}")
    if n == 0:
        return -1, TreeDecomposition({0: frozenset()})
    adj = _adjacency_masks(g)
    k = _degeneracy(adj, n)
    while True:
        order = _feasible_order(adj, n, k)
        if order is not None:
            td = decomposition_from_order(g, [g.vertices[i] for i in order])
            return k, td
        k += 1


def elimination_width(g: ColoredGraph, order) -> int:
    adj = _adjacency_masks(g)
    idx = {v: i for i, v in enumerate(g.vertices)}
    s, w = 0, -1
    for v in order:
        w = max(w, bin(_q(adj, s, idx[v])).count("1"))
        s |= 1 << idx[v]
    return w


def treewidth_by_elimination_orders(g: ColoredGraph) -> int:
    """Reference oracle: minimum width over all n! elimination orders."""
    if len(g.vertices) > MAX_ELIMINATION_SCAN:
        raise InstanceTooLarge(f"elimination scan handles at most {MAX_ELIMINATION_SCAN} vertices")
    if not g.vertices:
        return -1
    return min(elimination_width(g, order) for order in permutations(g.vertices))


# -- layout -> incidence decomposition --------------------------------------------


def layout_to_incidence_decomposition(h: Hypergraph, l: Mapping) -> TreeDecomposition:
    """Path decomposition L_1, R_1, ..., L_n, R_n of the incidence graph.

    With v_i the vertex at position i, L_i holds v_i and the hyperedges cut
    just before i, R_i holds v_i and those cut just after i; only
    hyperedges of size >= 2 take part.  Size-1 hyperedges hang off as
    pendant bags {e, v}, size-0 hyperedges as pendant bags {e}.
    """
    check_layout(h, l)
    n = h.n
    if sorted(l.values()) != list(range(1, n + 1)):
        raise ValueError("layout must map the vertices onto 1..n")
    at = {p: v for v, p in l.items()}
    big = [i for i, e in enumerate(h.edges) if len(e) >= 2]
    sub = Hypergraph(h.vertices, [h.edges[i] for i in big])
    bags, edges = {}, []
    prev = None
    for i in range(1, n + 1):
        v = at[i]
        for side, x in (("L", Fraction(2 * i - 1, 2)), ("R", Fraction(2 * i + 1, 2))):
            cut = cut_at(sub, l, x)
            bags[(side, i)] = frozenset([vnode(v)] + [enode(big[j]) for j in cut])
            if prev is not None:
                edges.append((prev, (side, i)))
            prev = (side, i)
    anchor = ("L", 1) if n else None
    for i, e in enumerate(h.edges):
        if len(e) == 1:
            (v,) = e
            bags[("P", i)] = frozenset([enode(i), vnode(v)])
            edges.append((("L", l[v]), ("P", i)))
        elif len(e) == 0:
            bags[("P", i)] = frozenset([enode(i)])
            if anchor is not None:
                edges.append((anchor, ("P", i)))
            anchor = anchor or ("P", i)
    if not bags:
        bags[("L", 0)] = frozenset()
    return TreeDecomposition(bags, edges)
