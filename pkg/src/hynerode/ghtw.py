"""Generalized hypertree width: exact cover width, an exact GHW oracle,
and the witness family H_n with its canonical good decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Mapping

from .boundaried import BoundariedHypergraph
from .core import Hypergraph, InstanceTooLarge, enode, incidence_graph, primal_graph, vnode
from .treedec import TreeDecomposition, Validation, _adjacency_masks, _q, decomposition_from_order, validate, width

MAX_GHW_VERTICES = 12
MAX_GHW_SCAN = 8


# -- cover width -----------------------------------------------------------------


def cover_width(bag: Iterable, h: Hypergraph) -> tuple[int, tuple]:
    """Minimum number of hyperedges covering ``bag``, with a witness (ordinals)."""
    bag = frozenset(bag)
    if not bag:
        return 0, ()
    order = sorted(bag, key=repr)
    bit = {v: 1 << i for i, v in enumerate(order)}
    full = (1 << len(order)) - 1
    masks = {}
    for j, e in enumerate(h.edges):
        m = 0
        for v in e:
            m |= bit.get(v, 0)
        if m and m not in masks:
            masks[m] = j
    # Hyperedges whose trace on the bag is contained in another trace never help.
    keep = [m for m in masks if not any(m != o and m & o == m for o in masks)]
    covered = 0
    for m in keep:
        covered |= m
    if covered != full:
        missing = [v for v in order if not covered & bit[v]]
        raise ValueError(f"vertex {missing[0]!r} lies in no hyperedge")
    by_vertex = {i: [m for m in keep if m >> i & 1] for i in range(len(order))}

    def search(uncov, budget, chosen):
        if not uncov:
            return chosen
        if budget == 0:
            return None
        i = min((i for i in range(len(order)) if uncov >> i & 1), key=lambda i: len(by_vertex[i]))
        for m in sorted(by_vertex[i], key=lambda m: -bin(m & uncov).count("1")):
            got = search(uncov & ~m, budget - 1, chosen + [m])
            if got is not None:
                return got
        return None

    for k in range(1, len(order) + 1):
        got = search(full, k, [])
        if got is not None:
            return k, tuple(sorted(masks[m] for m in got))
    raise AssertionError("unreachable")


def covers(bag: Iterable, h: Hypergraph, cover: Iterable[int]) -> bool:
    union = set()
    for j in cover:
        union |= h.edges[j]
    return set(bag) <= union


def non_isolated(h: Hypergraph) -> Hypergraph:
    used = set().union(*h.edges) if h.edges else set()
    return Hypergraph([v for v in h.vertices if v in used], h.edges)


def ghw_of_decomposition(h: Hypergraph, td: TreeDecomposition) -> int:
    """Largest cover width of a bag; isolated vertices are ignored."""
    check = validate(td, primal_graph(h))
    if not check:
        raise ValueError(f"not a tree decomposition of the primal graph: {check.message}")
    used = set().union(*h.edges) if h.edges else set()
    return max((cover_width(bag & used, h)[0] for bag in td.bags.values()), default=0)


def ghw_exact(h: Hypergraph) -> int:
    """Exact generalized hypertree width.

    Every tree decomposition can be refined to one induced by an
    elimination order whose bags are subsets of the original bags, so a
    subset dynamic program over elimination orders of the primal graph,
    scoring each bag {v} + fill neighbourhood by its cover width, is exact.
    """
    h = non_isolated(h)
    n = h.n
    if n > MAX_GHW_VERTICES:
        raise InstanceTooLarge(f"ghw_exact handles at most {MAX_GHW_VERTICES} vertices, got {n}")
    if n == 0:
        return 0
    g = primal_graph(h)
    adj = _adjacency_masks(g)
    verts = g.vertices
    memo = {}

    def cw(mask):
        if mask not in memo:
            memo[mask] = cover_width([verts[i] for i in range(n) if mask >> i & 1], h)[0]
        return memo[mask]

    full = (1 << n) - 1
    best = [0] * (full + 1)
    for s in range(1, full + 1):
        b = None
        rest = s
        while rest:
            bit = rest & -rest
            rest ^= bit
            v = bit.bit_length() - 1
            prev = s ^ bit
            val = best[prev]
            if b is not None and val >= b:
                continue
            val = max(val, cw(_q(adj, prev, v) | bit))
            if b is None or val < b:
                b = val
        best[s] = b
    return best[full]


def ghw_by_elimination_orders(h: Hypergraph) -> int:
    """Reference oracle: minimum over all elimination orders of the induced
    decomposition's cover width."""
    h = non_isolated(h)
    if h.n > MAX_GHW_SCAN:
        raise InstanceTooLarge(f"elimination scan handles at most {MAX_GHW_SCAN} vertices")
    if h.n == 0:
        return 0
    g = primal_graph(h)
    return min(ghw_of_decomposition(h, decomposition_from_order(g, order)) for order in permutations(g.vertices))


# -- the family H_n ----------------------------------------------------------------


S_NAMES = [f"s{i}" for i in range(1, 9)]
T_NAMES = [f"t{i}" for i in range(1, 9)]
BOUNDARY_EDGES = ["A", "B", "C", "D", "S_c", "S_d", "S_y", "S_z", "T_a", "T_b", "T_y", "T_z"]


def hn_edges(n: int) -> list:
    """Named hyperedges of H_n in their fixed order."""
    if not isinstance(n, int) or n < 1:
        raise ValueError("H_n needs n >= 1")
    x = lambda i: f"x{i}"  # noqa: E731
    out = [("A", {"a", "y"}), ("B", {"b", "z"}), ("C", {"c", "y"}), ("D", {"d", "z"})]
    out += [(f"B_S[{u},{v}]", {u, v}) for u, v in combinations(S_NAMES, 2)]
    out += [("S_c", {"c", "s1", "s2"}), ("S_d", {"d", "s3", "s4"}), ("S_y", {"y", "s5", "s6"}), ("S_z", {"z", "s7", "s8"})]
    out += [(f"B_T[{u},{v}]", {u, v}) for u, v in combinations(T_NAMES, 2)]
    out += [("T_a", {"a", "t1", "t2"}), ("T_b", {"b", "t3", "t4"}), ("T_y", {"y", "t5", "t6"}), ("T_z", {"z", "t7", "t8"})]
    out.append(("E_1", {"s8", x(1)}))
    for i in range(1, 2 * n):
        out.append((f"E_{3 * i}", {"a", "c", "y", x(3 * i)}))
        out.append((f"E_{3 * i + 1}", {"b", "d", "z", x(3 * i + 1)}))
    out.append((f"E_{6 * n}", {x(6 * n), "t1"}))
    for i in range(1, 6 * n):
        r = i % 6
        extra = {"a", "b"} if r in (1, 2) else {"c", "d"} if r in (4, 5) else set()
        out.append((f"E_{i},{i + 1}", extra | {x(i), x(i + 1)}))
    return out


def hn_vertices(n: int) -> list:
    return ["a", "b", "c", "d", "y", "z"] + S_NAMES + T_NAMES + [f"x{i}" for i in range(1, 6 * n + 1)]


def edge_index(n: int) -> dict:
    return {name: j for j, (name, _) in enumerate(hn_edges(n))}


def build_hn(n: int) -> BoundariedHypergraph:
    """H_n with 28 boundary labels: the twelve boundary hyperedges get
    1..12, then s1..s8 get 13..20 and t1..t8 get 21..28."""
    named = hn_edges(n)
    idx = {name: j for j, (name, _) in enumerate(named)}
    hg = Hypergraph(hn_vertices(n), [e for _, e in named])
    elabel = {lab: idx[name] for lab, name in enumerate(BOUNDARY_EDGES, start=1)}
    vlabel = {lab: v for lab, v in enumerate(S_NAMES + T_NAMES, start=13)}
    return BoundariedHypergraph(hg, vlabel, elabel)


def build_hn_extended(n: int) -> BoundariedHypergraph:
    """H_n plus 13 isolated boundary vertices labeled 29..41."""
    h = build_hn(n)
    extra = [f"w{i}" for i in range(1, 14)]
    hg = Hypergraph(list(h.hypergraph.vertices) + extra, h.hypergraph.edges)
    vlabel = dict(h.vlabel)
    vlabel.update({28 + i: v for i, v in enumerate(extra, start=1)})
    return BoundariedHypergraph(hg, vlabel, h.elabel)


def boundary_objects(h: BoundariedHypergraph) -> frozenset:
    """Boundary vertices and hyperedges as incidence-graph nodes."""
    return frozenset([vnode(v) for v in h.vlabel.values()] + [enode(i) for i in h.elabel.values()])


# -- good decompositions ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class GoodDecomposition:
    n: int
    h: BoundariedHypergraph
    td: TreeDecomposition
    cover: Mapping
    first: object
    last: object

    def backbone(self) -> list:
        """The tree path from the S-bag to the T-bag."""
        adj = self.td.neighbors()
        prev = {self.first: None}
        stack = [self.first]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    stack.append(y)
        path, x = [], self.last
        while x is not None:
            path.append(x)
            x = prev[x]
        return path[::-1]


def canonical_bags(n: int) -> list:
    """(node id, bag, cover names) along the path B_-1, B_0, ..., B_6n+1."""
    x = lambda i: f"x{i}"  # noqa: E731
    out = [(-1, set(S_NAMES) | {"c", "d", "y", "z"}, ["S_c", "S_d", "S_y", "S_z"])]
    out.append((0, {"s8", x(1), "c", "d", "y", "z"}, ["E_1", "C", "D"]))
    for i in range(1, 6 * n):
        bag = {"a", "b", "c", "d", "y", "z", x(i), x(i + 1)}
        r = i % 6
        if r in (1, 2):
            cov = [f"E_{i},{i + 1}", "C", "D"]
        elif r in (4, 5):
            cov = [f"E_{i},{i + 1}", "A", "B"]
        else:
            cov = [f"E_{i}", f"E_{i + 1}"]
        out.append((i, bag, cov))
    out.append((6 * n, {"t1", x(6 * n), "a", "b", "y", "z"}, [f"E_{6 * n}", "A", "B"]))
    out.append((6 * n + 1, set(T_NAMES) | {"a", "b", "y", "z"}, ["T_a", "T_b", "T_y", "T_z"]))
    return out


def canonical_good_decomposition(n: int) -> GoodDecomposition:
    h = build_hn(n)
    idx = edge_index(n)
    rows = canonical_bags(n)
    bags = {i: frozenset(b) for i, b, _ in rows}
    cover = {i: frozenset(idx[c] for c in cov) for i, _, cov in rows}
    ids = [i for i, _, _ in rows]
    td = TreeDecomposition(bags, list(zip(ids, ids[1:])), root=-1)
    return GoodDecomposition(n, h, td, cover, -1, 6 * n + 1)


def _tags(h: BoundariedHypergraph, cover: Iterable[int]) -> tuple[bool, bool]:
    lab = {j: k for k, j in h.elabel.items()}
    names = {BOUNDARY_EDGES[lab[j] - 1] for j in cover if j in lab and lab[j] <= 12}
    return {"C", "D"} <= names, {"A", "B"} <= names


def signature_of(gd: GoodDecomposition) -> int:
    """Number of switches: minimal backbone stretches going from a bag whose
    cover holds C and D to a bag whose cover holds A and B."""
    return count_switches([_tags(gd.h, gd.cover[node]) for node in gd.backbone()])


def count_switches(tags) -> int:
    """``tags`` is a sequence of (has C and D, has A and B) pairs."""
    count = 0
    last_cd = None
    for j, (cd, ab) in enumerate(tags):
        if cd:
            last_cd = j
        if ab and last_cd is not None and not any(tags[m][1] for m in range(last_cd, j)):
            count += 1
    return count


def is_good(gd: GoodDecomposition) -> Validation:
    """Bag covers are valid, the end bags are S+{c,d,y,z} and T+{a,b,y,z},
    and every other bag uses at most three hyperedges, two of them on
    the boundary when it uses exactly three."""
    h = gd.h
    hg = h.hypergraph
    want_first = frozenset(S_NAMES) | {"c", "d", "y", "z"}
    want_last = frozenset(T_NAMES) | {"a", "b", "y", "z"}
    if gd.td.bags.get(gd.first) != want_first:
        return Validation(False, "first-bag", gd.first, "the S-side end bag is not S plus {c,d,y,z}")
    if gd.td.bags.get(gd.last) != want_last:
        return Validation(False, "last-bag", gd.last, "the T-side end bag is not T plus {a,b,y,z}")
    boundary = set(h.elabel.values())
    for node, bag in gd.td.bags.items():
        cov = gd.cover.get(node)
        if cov is None:
            return Validation(False, "cover", node, f"bag {node!r} has no cover")
        if any(not 0 <= j < hg.m for j in cov):
            return Validation(False, "cover", node, f"bag {node!r} uses an unknown hyperedge")
        if not covers(bag, hg, cov):
            return Validation(False, "cover", node, f"cover of bag {node!r} misses a vertex")
        if node in (gd.first, gd.last):
            continue
        if len(cov) > 3:
            return Validation(False, "size", node, f"bag {node!r} uses {len(cov)} hyperedges")
        if len(cov) == 3 and len(set(cov) & boundary) < 2:
            return Validation(False, "boundary", node, f"bag {node!r} uses three hyperedges with fewer than two on the boundary")
    return Validation(True)


def ab_cover_exists(bag: Iterable, h: Hypergraph, n: int, pair=("A", "B"), max_size: int = 3) -> bool:
    """Is there a cover of at most ``max_size`` hyperedges containing both named ones?"""
    idx = edge_index(n)
    base = set(h.edges[idx[pair[0]]]) | set(h.edges[idx[pair[1]]])
    rest = set(bag) - base
    if not rest:
        return True
    for size in range(1, max_size - 1):
        for combo in combinations(range(h.m), size):
            if rest <= set().union(*(h.edges[j] for j in combo)):
                return True
    return False


def verify_hn(n: int) -> list:
    """Claim-by-claim report: list of (name, passed, detail)."""
    gd = canonical_good_decomposition(n)
    h = gd.h
    hg = h.hypergraph
    out = []
    out.append(("boundary-labels", h.t == 28, str(h.t)))
    out.append(("vertices", hg.n == 22 + 6 * n, str(hg.n)))
    v = validate(gd.td, primal_graph(hg))
    out.append(("decomposition-valid", bool(v), v.message or "ok"))
    widths = {node: cover_width(bag, hg)[0] for node, bag in gd.td.bags.items()}
    ghw = max(widths.values())
    out.append(("cover-width", ghw == 4, str(ghw)))
    given = all(len(gd.cover[node]) == widths[node] for node in gd.td.bags)
    out.append(("covers-optimal", given, "ok" if given else "a listed cover is not minimum"))
    good = is_good(gd)
    out.append(("good", bool(good), good.message or "ok"))
    sig = signature_of(gd)
    out.append(("signature", sig == n, str(sig)))
    no_ab = all(not ab_cover_exists(gd.td.bags[j], hg, n, ("A", "B"))
                for i in range(0, 6 * n, 6) for j in range(i, i + 4))
    out.append(("no-AB-cover-on-P[i,i+3]", no_ab, "i = 0, 6, ..."))
    no_cd = all(not ab_cover_exists(gd.td.bags[j], hg, n, ("C", "D"))
                for i in range(3, 6 * n, 6) for j in range(i, i + 4))
    out.append(("no-CD-cover-on-P[i,i+3]", no_cd, "i = 3, 9, ..."))
    plain = incidence_decomposition_hn(n)
    inc = incidence_graph(hg)
    out.append(("incidence-width", bool(validate(plain, inc)) and width(plain) <= 12, str(width(plain))))
    rooted = incidence_decomposition_hn(n, rooted_at_boundary=True)
    has_root = any(boundary_objects(h) <= b for b in rooted.bags.values())
    out.append(("rooted-incidence-width", bool(validate(rooted, inc)) and width(rooted) <= 40 and has_root,
                str(width(rooted))))
    ext = build_hn_extended(n)
    ext_td = incidence_decomposition_hn(n, rooted_at_boundary=True, extended=True)
    ok_ext = (ext.t == 41 and bool(validate(ext_td, incidence_graph(ext.hypergraph))) and width(ext_td) <= 40
              and any(boundary_objects(ext) <= b for b in ext_td.bags.values()))
    out.append(("extended-rooted-width", ok_ext, str(width(ext_td))))
    return out


# -- incidence decompositions -------------------------------------------------------


def incidence_decomposition_hn(n: int, rooted_at_boundary: bool = False, extended: bool = False) -> TreeDecomposition:
    """Tree decomposition of the incidence graph of H_n.

    A path follows the chain x_1, E_{1,2}, x_2, ..., x_6n with a, b, c, d,
    y, z in every bag; the quaternary and end hyperedges hang off it, the
    S and T gadgets hang off the bags of E_1 and E_6n.  ``rooted_at_boundary``
    adds all boundary objects to every bag and a root bag holding exactly
    the boundary; ``extended`` does the same for the 41-label variant.
    """
    h = build_hn_extended(n) if extended else build_hn(n)
    idx = edge_index(n)
    V = vnode
    Ei = lambda name: enode(idx[name])  # noqa: E731
    core = {V(v) for v in ("a", "b", "c", "d", "y", "z")}
    bags, edges = {}, []

    def add(node, members, parent=None):
        bags[node] = frozenset(members)
        if parent is not None:
            edges.append((parent, node))

    prev = None
    for i in range(1, 6 * n):
        add(("P", i), core | {V(f"x{i}"), V(f"x{i + 1}"), Ei(f"E_{i},{i + 1}")}, prev)
        prev = ("P", i)
    for i in range(1, 2 * n):
        for j in (3 * i, 3 * i + 1):
            add(("Q", j), core | {V(f"x{j}"), Ei(f"E_{j}")}, ("P", 3 * i))
    add("E_1", core | {V("x1"), V("s8"), Ei("E_1")}, ("P", 1))
    add("E_last", core | {V(f"x{6 * n}"), V("t1"), Ei(f"E_{6 * n}")}, ("P", 6 * n - 1))
    add("S", {V(s) for s in S_NAMES} | {V(v) for v in "cdyz"}, "E_1")
    add("T", {V(s) for s in T_NAMES} | {V(v) for v in "abyz"}, "E_last")
    for name, members in hn_edges(n):
        if name.startswith(("B_S", "S_")):
            add(("R", name), {Ei(name)} | {V(v) for v in members}, "S")
        elif name.startswith(("B_T", "T_")):
            add(("R", name), {Ei(name)} | {V(v) for v in members}, "T")
        elif name in ("A", "B", "C", "D"):
            add(("R", name), {Ei(name)} | {V(v) for v in members}, ("P", 1))
    root = ("P", 1)
    if rooted_at_boundary:
        base = boundary_objects(build_hn(n))
        bags = {k: b | base for k, b in bags.items()}
        full = boundary_objects(h)
        add("boundary", full, "S")
        root = "boundary"
    if extended and not rooted_at_boundary:
        for v in list(h.vlabel.values())[28:]:
            add(("iso", v), {V(v)}, "S")
    return TreeDecomposition(bags, edges, root=root)
