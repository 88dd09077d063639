"""Tests for bounded cutwidth of glued hypergraphs.

A test (pi, S, k) of size n summarises one side H of a glued hypergraph
laid out on the integer positions 1..n: ``pi`` places H's boundary
vertices, ``S[i] = (w_i, E_i)`` gives the number of H's unlabeled
hyperedges crossing the open gap (i, i+1) and the set of hyperedge
labels whose H-part spans position i.  A boundaried hypergraph G passes
the test when its free vertices fit into the gaps so that, at every
non-integer point, G's own cut plus the load w stays within k.
"""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .boundaried import BoundariedHypergraph, GlueError, glue_hypergraphs, gluable
from .core import Hypergraph, InstanceTooLarge
from .layout import decide_cutwidth

MAX_FREE_VERTICES = 14


@dataclass(frozen=True, eq=False)
class Test:
    __test__ = False

    pi: Mapping
    S: tuple
    k: int

    def __post_init__(self):
        S = tuple((int(w), frozenset(E)) for w, E in self.S)
        pi = dict(self.pi)
        if not S:
            raise ValueError("a test needs at least the entry S_0")
        n = len(S) - 1
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError("k must be a natural number")
        for i, (w, _) in enumerate(S):
            if not 0 <= w <= self.k:
                raise ValueError(f"load w_{i} = {w} outside 0..{self.k}")
        for lab, p in pi.items():
            if not isinstance(lab, int) or lab < 1:
                raise ValueError(f"bad label {lab!r}")
            if not isinstance(p, int) or not 1 <= p <= n:
                raise ValueError(f"position of label {lab} must lie in 1..{n}")
        if len(set(pi.values())) != len(pi):
            raise ValueError("two labels mapped to the same position")
        labels = set().union(*(E for _, E in S))
        if any(not isinstance(x, int) or x < 1 for x in labels):
            raise ValueError("hyperedge labels must be positive integers")
        if labels & set(pi):
            raise ValueError(f"labels {sorted(labels & set(pi))} used both as positions and as hyperedge labels")
        for lab in labels:
            idx = [i for i, (_, E) in enumerate(S) if lab in E]
            if idx[-1] - idx[0] + 1 != len(idx):
                raise ValueError(f"label {lab} does not occupy an interval")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "pi", pi)

    @property
    def n(self) -> int:
        return len(self.S) - 1

    @property
    def w(self) -> tuple:
        return tuple(w for w, _ in self.S)

    @property
    def E(self) -> tuple:
        return tuple(E for _, E in self.S)

    def edge_labels(self) -> frozenset:
        return frozenset().union(*self.E)

    def key(self):
        return (tuple(sorted(self.pi.items())), self.S, self.k)

    def __eq__(self, other):
        if not isinstance(other, Test):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        rows = ", ".join(f"({w},{{{','.join(map(str, sorted(E)))}}})" for w, E in self.S)
        return f"Test(pi={dict(sorted(self.pi.items()))}, S=({rows}), k={self.k})"


# -- H-tests ---------------------------------------------------------------------


def make_h_test(h: BoundariedHypergraph, l: Mapping, k: int, symmetric: bool = False) -> Test:
    """The test recorded by laying out H on 1..n with ``l``.

    w_i counts unlabeled hyperedges with members at positions p <= i < q;
    E_i collects labels of hyperedges with members at p <= i <= q (one
    member may serve as both).  ``symmetric=True`` uses p <= i < q for
    E_i as well.
    """
    hg = h.hypergraph
    n = hg.n
    if set(l) != set(hg.vertices) or sorted(l.values()) != list(range(1, n + 1)):
        raise ValueError("layout must map the vertices of H onto 1..n")
    inv = {i: lab for lab, i in h.elabel.items()}
    w = [0] * (n + 1)
    E = [set() for _ in range(n + 1)]
    for j, e in enumerate(hg.edges):
        if not e:
            continue
        lo, hi = min(l[v] for v in e), max(l[v] for v in e)
        if j in inv:
            top = hi if not symmetric else hi - 1
            for i in range(lo, top + 1):
                E[i].add(inv[j])
        else:
            for i in range(lo, hi):
                w[i] += 1
    if max(w) > k:
        raise ValueError(f"layout puts {max(w)} unlabeled hyperedges over one gap, more than k = {k}")
    pi = {lab: l[v] for lab, v in h.vlabel.items()}
    return Test(pi, tuple(zip(w, E)), k)


def h_tests(h: BoundariedHypergraph, k: int, symmetric: bool = False) -> list:
    """Distinct H-tests over all layouts of H whose loads stay within k."""
    out, seen = [], set()
    for order in itertools.permutations(h.hypergraph.vertices):
        l = {v: i for i, v in enumerate(order, start=1)}
        try:
            t = make_h_test(h, l, k, symmetric)
        except ValueError:
            continue
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


# -- passing ---------------------------------------------------------------------


def _fixed_positions(g: BoundariedHypergraph, test: Test) -> list:
    """Per hyperedge: integer positions contributed by boundary vertices and E."""
    for lab, v in g.vlabel.items():
        if lab not in test.pi:
            raise ValueError(f"boundary vertex label {lab} has no position in the test")
    for lab in g.elabel:
        if lab in test.pi:
            raise ValueError(f"label {lab} names a hyperedge here but a vertex position in the test")
    vpos = {v: test.pi[lab] for lab, v in g.vlabel.items()}
    inv = {i: lab for lab, i in g.elabel.items()}
    out = []
    for j, e in enumerate(g.hypergraph.edges):
        fixed = [vpos[v] for v in e if v in vpos]
        if j in inv:
            fixed += [i for i, E in enumerate(test.E) if inv[j] in E]
        out.append(fixed)
    return out


def joint_cut(g: BoundariedHypergraph, f: Mapping, test: Test, x) -> frozenset:
    """Hyperedge ordinals of g whose positions lie strictly on both sides of x."""
    fixed = _fixed_positions(g, test)
    out = []
    for j, e in enumerate(g.hypergraph.edges):
        pos = [f[v] for v in e] + fixed[j]
        if any(p < x for p in pos) and any(p > x for p in pos):
            out.append(j)
    return frozenset(out)


def check_compatible(g: BoundariedHypergraph, f: Mapping, test: Test) -> None:
    if set(f) != set(g.hypergraph.vertices):
        raise ValueError("layout must place exactly the vertices of g")
    if len(set(f.values())) != len(f):
        raise ValueError("layout is not injective")
    for lab, v in g.vlabel.items():
        if lab not in test.pi or f[v] != test.pi[lab]:
            raise ValueError(f"boundary vertex with label {lab} is not at its test position")
    bset = g.boundary_vertices
    for v in g.hypergraph.vertices:
        if v not in bset:
            p = Fraction(f[v])
            if p.denominator == 1 or not 0 < p < test.n + 1:
                raise ValueError(f"free vertex {v!r} must sit strictly inside a gap (i, i+1), 0 <= i <= n")


def joint_cutwidth(g: BoundariedHypergraph, f: Mapping, test: Test) -> int:
    """max over non-integer x of |joint cut at x| + w_floor(x)."""
    check_compatible(g, f, test)
    best = 0
    for gap in range(test.n + 1):
        inside = sorted(Fraction(p) for p in f.values() if gap < p < gap + 1)
        pts = [gap] + inside + [gap + 1]
        for a, b in zip(pts, pts[1:]):
            x = (Fraction(a) + Fraction(b)) / 2
            best = max(best, len(joint_cut(g, f, test, x)) + test.S[gap][0])
    return best


@dataclass(frozen=True)
class PassResult:
    ok: bool
    layout: dict | None = None

    def __bool__(self):
        return self.ok


def passes(g: BoundariedHypergraph, test: Test) -> PassResult:
    """Exact decision over states (gap, set of free vertices already placed).

    Every state visited corresponds to an open stretch of the line, so the
    joint cut plus the gap's load must stay within k in each of them.
    """
    free = g.free_vertices()
    c = len(free)
    if c > MAX_FREE_VERTICES:
        raise InstanceTooLarge(f"passes handles at most {MAX_FREE_VERTICES} free vertices, got {c}")
    fixed = _fixed_positions(g, test)
    bit = {v: 1 << i for i, v in enumerate(free)}
    edges = []
    for j, e in enumerate(g.hypergraph.edges):
        m = 0
        for v in e:
            m |= bit.get(v, 0)
        lo = min(fixed[j]) if fixed[j] else None
        hi = max(fixed[j]) if fixed[j] else None
        if m == 0 and (lo is None or lo == hi):
            continue
        edges.append((m, lo, hi))
    n, k = test.n, test.k
    w = test.w
    full = (1 << c) - 1

    def cost(gap, p):
        cut = w[gap]
        for m, lo, hi in edges:
            left = (lo is not None and lo <= gap) or (p & m)
            right = (hi is not None and hi >= gap + 1) or (m & ~p)
            if left and right:
                cut += 1
        return cut

    start = (0, 0)
    if cost(*start) > k:
        return PassResult(False)
    parent = {start: None}
    stack = [start]
    goal = (n, full)
    while stack:
        state = stack.pop()
        if state == goal:
            break
        gap, p = state
        moves = []
        if gap < n:
            moves.append((gap + 1, p))
        for i in range(c - 1, -1, -1):
            if not p >> i & 1:
                moves.append((gap, p | 1 << i))
        # Last pushed is explored first: lowest-index placement, then advancing.
        for nxt in moves:
            if nxt not in parent and cost(*nxt) <= k:
                parent[nxt] = state
                stack.append(nxt)
    if goal not in parent:
        return PassResult(False)
    path = []
    s = goal
    while s is not None:
        path.append(s)
        s = parent[s]
    path.reverse()
    placed = {gap: [] for gap in range(n + 1)}
    for (g0, p0), (g1, p1) in zip(path, path[1:]):
        if p1 != p0:
            placed[g0].append(free[(p1 ^ p0).bit_length() - 1])
    f = {v: test.pi[lab] for lab, v in g.vlabel.items()}
    for gap, vs in placed.items():
        for j, v in enumerate(vs, start=1):
            f[v] = gap + Fraction(j, len(vs) + 1)
    return PassResult(True, f)


# -- shrinking -------------------------------------------------------------------


def straits(test: Test) -> list:
    """Maximal runs (start, end) of equal E, inclusive indices."""
    out, start = [], 0
    E = test.E
    for i in range(1, len(E) + 1):
        if i == len(E) or E[i] != E[start]:
            out.append((start, i - 1))
            start = i
    return out


def load_patterns(test: Test) -> list:
    """Maximal index runs inside a strait that avoid pinned indices.

    Pinned: positions of boundary labels, and a strait's last index when
    some label's interval ends there (the gap right after it sees the
    labeled hyperedge differently from the rest of the strait).
    """
    E = test.E
    n = test.n
    pinned = set(test.pi.values())
    out = []
    for a, b in straits(test):
        ends = (b == n and E[b]) or (b < n and not E[b] <= E[b + 1])
        run = []
        for i in range(a, b + 1):
            if i in pinned or (i == b and ends):
                if run:
                    out.append(run)
                run = []
            else:
                run.append(i)
        if run:
            out.append(run)
    return out


def _delete(test: Test, idx: Sequence[int], w_at: dict | None = None) -> Test:
    drop = set(idx)
    S = []
    for i, (w, E) in enumerate(test.S):
        if i not in drop:
            S.append(((w_at or {}).get(i, w), E))
    pi = {lab: p - sum(1 for d in drop if d < p) for lab, p in test.pi.items()}
    return Test(pi, tuple(S), test.k)


def _reduce_once(test: Test):
    w = test.w
    pats = load_patterns(test)
    for pat in pats:
        for a, b, c in zip(pat, pat[1:], pat[2:]):
            if w[a] <= w[b] <= w[c] or w[a] >= w[b] >= w[c]:
                return _delete(test, [b])
    for rule in (max, min):
        for pat in pats:
            L = len(pat)
            for s in range(1, L - 1):
                for e in range(s + 1, L - 1):
                    block = [w[pat[j]] for j in range(s, e + 1)]
                    a, b = w[pat[s - 1]], w[pat[e + 1]]
                    if rule is max and min(block) >= max(a, b) or rule is min and max(block) <= min(a, b):
                        return _delete(test, pat[s + 1:e + 1], {pat[s]: rule(block)})
    return None


def shrink(test: Test) -> Test:
    """Apply the three load-pattern reductions until none applies.

    R1 deletes the middle of a monotone triple; R2 (R3) replaces an
    interior block of length at least two whose loads are all at least
    the larger (at most the smaller) of its two neighbours by one entry
    carrying the block's maximum (minimum).
    """
    while True:
        nxt = _reduce_once(test)
        if nxt is None:
            return test
        test = nxt


def is_reduced(test: Test) -> bool:
    return _reduce_once(test) is None


def size_bound(t: int, k: int) -> int:
    return 2 * t * (t + 1) * (2 * k + 2)


# -- generators ------------------------------------------------------------------


def random_test(rng: random.Random, t: int, k: int, n: int, vertex_labels=None) -> Test:
    """Random valid test over labels 1..t.  Each label is a position, a
    hyperedge interval, or unused, unless ``vertex_labels`` fixes the
    position labels."""
    labels = list(range(1, t + 1))
    if vertex_labels is None:
        kinds = {lab: rng.choice("vex") for lab in labels}
    else:
        kinds = {lab: ("v" if lab in vertex_labels else rng.choice("ex")) for lab in labels}
    vl = [lab for lab in labels if kinds[lab] == "v"][:n]
    positions = rng.sample(range(1, n + 1), len(vl)) if n else []
    pi = dict(zip(vl, positions))
    E = [set() for _ in range(n + 1)]
    for lab in labels:
        if kinds[lab] == "e":
            a, b = sorted(rng.randint(0, n) for _ in range(2))
            for i in range(a, b + 1):
                E[i].add(lab)
    S = tuple((rng.randint(0, k), frozenset(E[i])) for i in range(n + 1))
    return Test(pi, S, k)


def all_tests(vertex_labels: Sequence[int], edge_labels: Sequence[int], k: int, n: int) -> Iterable[Test]:
    """Every test of size exactly n where each given vertex label has a
    position and each given edge label occupies a nonempty interval."""
    intervals = [(a, b) for a in range(n + 1) for b in range(a, n + 1)]
    for positions in itertools.permutations(range(1, n + 1), len(vertex_labels)):
        pi = dict(zip(vertex_labels, positions))
        for ivs in itertools.product(intervals, repeat=len(edge_labels)):
            E = [frozenset(lab for lab, (a, b) in zip(edge_labels, ivs) if a <= i <= b) for i in range(n + 1)]
            for w in itertools.product(range(k + 1), repeat=n + 1):
                yield Test(pi, tuple(zip(w, E)), k)


def reduced_tests(vertex_labels: Sequence[int], edge_labels: Sequence[int], k: int, max_n: int) -> list:
    """All reduced tests up to size ``max_n`` (brute force; tiny cases only)."""
    return [t for n in range(max_n + 1) for t in all_tests(vertex_labels, edge_labels, k, n) if is_reduced(t)]


# -- signatures and congruence probes ---------------------------------------------


def test_signature(g: BoundariedHypergraph, universe: Sequence[Test]) -> tuple:
    """Pass/fail bit per test of the universe."""
    return tuple(bool(passes(g, t)) for t in universe)


test_signature.__test__ = False


@dataclass(frozen=True)
class CongruenceResult:
    ok: bool
    partner: BoundariedHypergraph | None = None
    skipped: int = 0

    def __bool__(self):
        return self.ok


def in_cut(g: BoundariedHypergraph, h: BoundariedHypergraph, k: int) -> bool:
    return decide_cutwidth(glue_hypergraphs(g, h).hypergraph, k)


def congruent_sample(g1: BoundariedHypergraph, g2: BoundariedHypergraph, k: int,
                     partners: Iterable[BoundariedHypergraph]) -> CongruenceResult:
    """Do g1 and g2 agree on cutwidth <= k after gluing each partner?"""
    skipped = 0
    for h in partners:
        if not (gluable(g1, h) and gluable(g2, h)):
            skipped += 1
            continue
        if in_cut(g1, h, k) != in_cut(g2, h, k):
            return CongruenceResult(False, h, skipped)
    if skipped:
        warnings.warn(f"{skipped} partner(s) not gluable to both sides were skipped", stacklevel=2)
    return CongruenceResult(True, None, skipped)


def distinguishing_test(g1: BoundariedHypergraph, g2: BoundariedHypergraph, h: BoundariedHypergraph, k: int):
    """A reduced test that g1 passes and g2 fails, built from partner h.

    Requires g1 + h to have cutwidth <= k and g2 + h not.  Each H-test of h
    is shrunk and checked directly, so the answer does not rely on any
    theory.  Returns None if no such test is found.
    """
    for t in h_tests(h, k):
        r = shrink(t)
        if passes(g1, r) and not passes(g2, r):
            return r
    return None


def gluing_is_compatible(g: BoundariedHypergraph, h: BoundariedHypergraph) -> bool:
    try:
        glue_hypergraphs(g, h)
    except GlueError:
        return False
    return True


def empty_boundaried(vlabels: Iterable[int] = (), elabels: Iterable[int] = ()) -> BoundariedHypergraph:
    """Only the boundary: isolated labeled vertices and empty labeled hyperedges."""
    vl = list(vlabels)
    el = list(elabels)
    hg = Hypergraph([f"b{lab}" for lab in vl], [frozenset() for _ in el])
    return BoundariedHypergraph(hg, {lab: f"b{lab}" for lab in vl}, {lab: i for i, lab in enumerate(el)})
