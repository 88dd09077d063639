"""Size-t parsing operators, parse trees, and conversion of tree
decompositions into parse trees.

Operators (s-expression spelling in brackets):

* ``empty(n1, ..., nc)`` [``(empty n1 ... nc)``]: t isolated boundary
  vertices, the first n1 of color 1, the next n2 of color 2 and so on,
  labeled 1..t in that order.
* ``e`` [``(e X)``]: edge between the vertices labeled 1 and 2.
* ``u_l`` [``(u l X)``]: new vertex of color l takes label 1; the old
  holder of label 1 leaves the boundary.
* ``gamma`` [``(gamma X)``]: label j moves to the vertex labeled j+1,
  cyclically.
* ``i`` [``(i X)``]: labels 1 and 2 swap.
* ``glue`` [``(glue X Y)``]: boundaried gluing.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from .boundaried import BoundariedColoredGraph, glue_graphs
from .core import ColoredGraph
from .treedec import TreeDecomposition, validate, width

ARITY = {"empty": 0, "e": 1, "u": 1, "gamma": 1, "i": 1, "glue": 2}


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class ParseNode:
    op: str
    params: tuple = ()
    children: tuple = ()

    def __post_init__(self):
        if self.op not in ARITY:
            raise ParseError(f"unknown operator {self.op!r}")
        if len(self.children) != ARITY[self.op]:
            raise ParseError(f"operator {self.op} takes {ARITY[self.op]} operand(s), got {len(self.children)}")
        if self.op == "empty":
            if not self.params or any(not isinstance(c, int) or c < 0 for c in self.params):
                raise ParseError("empty needs non-negative color counts")
        elif self.op == "u":
            if len(self.params) != 1 or not isinstance(self.params[0], int) or self.params[0] < 1:
                raise ParseError("u needs one positive color")
        elif self.params:
            raise ParseError(f"operator {self.op} takes no parameters")

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def __str__(self):
        return format_sexpr(self)


def empty(*counts) -> ParseNode:
    return ParseNode("empty", tuple(counts))


def op_e(x) -> ParseNode:
    return ParseNode("e", (), (x,))


def op_u(color, x) -> ParseNode:
    return ParseNode("u", (color,), (x,))


def op_gamma(x) -> ParseNode:
    return ParseNode("gamma", (), (x,))


def op_i(x) -> ParseNode:
    return ParseNode("i", (), (x,))


def op_glue(x, y) -> ParseNode:
    return ParseNode("glue", (), (x, y))


# -- s-expressions ------------------------------------------------------------


def format_sexpr(node: ParseNode) -> str:
    parts = [node.op] + [str(p) for p in node.params] + [format_sexpr(c) for c in node.children]
    return "(" + " ".join(parts) + ")"


def parse_sexpr(text: str) -> ParseNode:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def expr():
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != "(":
            raise ParseError(f"expected '(' at token {pos}")
        pos += 1
        if pos >= len(tokens):
            raise ParseError("unexpected end of input")
        op = tokens[pos]
        pos += 1
        params, kids = [], []
        while pos < len(tokens) and tokens[pos] != ")":
            if tokens[pos] == "(":
                kids.append(expr())
            else:
                try:
                    params.append(int(tokens[pos]))
                except ValueError:
                    raise ParseError(f"bad parameter {tokens[pos]!r}") from None
                pos += 1
        if pos >= len(tokens):
            raise ParseError("missing ')'")
        pos += 1
        return ParseNode(op, tuple(params), tuple(kids))

    node = expr()
    if pos != len(tokens):
        raise ParseError("trailing tokens after expression")
    return node


# -- operator semantics --------------------------------------------------------


class _Names:
    """Fresh integer vertex names, skipping any in ``taken``."""

    def __init__(self, taken=()):
        self._it = itertools.count()
        self._taken = set(taken)

    def __call__(self):
        v = next(self._it)
        while v in self._taken:
            v = next(self._it)
        return v


def _check_t(g: BoundariedColoredGraph, op: str, need: int):
    if g.t < need:
        raise ValueError(f"operator {op} needs t >= {need}, boundary has t = {g.t}")


def apply_operator(op: str, args=(), params=(), fresh=None) -> BoundariedColoredGraph:
    """Apply one operator to already evaluated operands."""
    if fresh is None:
        fresh = _Names(v for g in args for v in g.graph.vertices)
    if len(args) != ARITY.get(op, -1):
        raise ValueError(f"operator {op} takes {ARITY.get(op)} operand(s), got {len(args)}")
    if op == "empty":
        vertices, color, label = [], {}, {}
        for c, count in enumerate(params, start=1):
            for _ in range(count):
                v = fresh()
                vertices.append(v)
                color[v] = c
                label[len(vertices)] = v
        return BoundariedColoredGraph(ColoredGraph(vertices, (), color), label)
    if op == "glue":
        return glue_graphs(*args)
    (g,) = args
    cg = g.graph
    if op == "e":
        _check_t(g, "e", 2)
        new = ColoredGraph(cg.vertices, set(cg.edges) | {frozenset((g.label[1], g.label[2]))}, cg.color)
        return BoundariedColoredGraph(new, g.label)
    if op == "u":
        (c,) = params
        v = fresh()
        color = dict(cg.color)
        color[v] = c
        label = dict(g.label)
        if not label:
            raise ValueError("operator u needs t >= 1")
        label[1] = v
        return BoundariedColoredGraph(ColoredGraph(list(cg.vertices) + [v], cg.edges, color), label)
    if op == "gamma":
        t = g.t
        return BoundariedColoredGraph(cg, {j: g.label[j % t + 1] for j in g.label})
    if op == "i":
        _check_t(g, "i", 2)
        label = dict(g.label)
        label[1], label[2] = g.label[2], g.label[1]
        return BoundariedColoredGraph(cg, label)
    raise ValueError(f"unknown operator {op!r}")


def boundary_size(node: ParseNode) -> int:
    """The t implied by the leaves; raises if leaves disagree."""
    sizes = set()

    def walk(x):
        if x.op == "empty":
            sizes.add(sum(x.params))
        for c in x.children:
            walk(c)

    walk(node)
    if len(sizes) != 1:
        raise ParseError(f"leaves disagree on the boundary size: {sorted(sizes)}")
    return sizes.pop()


def eval_parse_tree(node: ParseNode, t: int | None = None) -> BoundariedColoredGraph:
    """Bottom-up evaluation.  Vertices are fresh integers."""
    tt = boundary_size(node)
    if t is not None and t != tt:
        raise ParseError(f"tree builds {tt}-boundaried graphs, asked for t = {t}")
    fresh = _Names()
    # Iterative post-order so deep trees do not hit the recursion limit.
    stack = [(node, False)]
    values = []
    while stack:
        x, done = stack.pop()
        if done:
            k = len(x.children)
            args = values[len(values) - k:] if k else []
            del values[len(values) - k:]
            values.append(apply_operator(x.op, args, x.params, fresh))
        else:
            stack.append((x, True))
            for c in reversed(x.children):
                stack.append((c, False))
    return values[0]


def random_parse_tree(rng: random.Random, t: int, size: int, colors: int = 2, max_u: int | None = None) -> ParseNode:
    """A random well-formed tree with about ``size`` nodes."""
    budget = [size]
    u_left = [size if max_u is None else max_u]

    def leaf():
        counts = [0] * colors
        for _ in range(t):
            counts[rng.randrange(colors)] += 1
        return empty(*counts)

    def gen():
        budget[0] -= 1
        if budget[0] <= 0:
            return leaf()
        choices = ["e", "gamma", "glue", "empty"]
        if t >= 2:
            choices.append("i")
        else:
            choices.remove("e")
        if u_left[0] > 0:
            choices.append("u")
        op = rng.choice(choices)
        if op == "empty":
            return leaf()
        if op == "glue":
            return _glue_compatible(gen(), gen())
        if op == "u":
            u_left[0] -= 1
            return op_u(rng.randint(1, colors), gen())
        return ParseNode(op, (), (gen(),))

    def _glue_compatible(a, b):
        ga, gb = _colors_of(a), _colors_of(b)
        if ga == gb:
            return op_glue(a, b)
        return a

    return gen()


def _colors_of(node: ParseNode) -> tuple:
    """Boundary colors by label, computed symbolically."""
    if node.op == "empty":
        out = []
        for c, count in enumerate(node.params, start=1):
            out += [c] * count
        return tuple(out)
    if node.op == "glue":
        return _colors_of(node.children[0])
    inner = list(_colors_of(node.children[0]))
    if node.op == "u":
        inner[0] = node.params[0]
    elif node.op == "gamma":
        inner = inner[1:] + inner[:1]
    elif node.op == "i":
        inner[0], inner[1] = inner[1], inner[0]
    return tuple(inner)


# -- tree decomposition -> parse tree -------------------------------------------


def smooth_decomposition(td: TreeDecomposition, vertices, t: int, keep=None):
    """Reshape ``td`` so every bag has exactly t vertices and neighbouring
    bags differ by exchanging a single vertex.

    Returns ``(bags, adjacency, keep)`` where ``keep`` tracks the node that
    absorbed the requested one.
    """
    order = {v: i for i, v in enumerate(vertices)}
    if len(order) < t:
        raise ValueError(f"graph has {len(order)} vertices, fewer than t = {t}")
    bags = {b: set(v) for b, v in td.bags.items()}
    adj = {b: set() for b in bags}
    for a, b in td.tree_edges:
        adj[a].add(b)
        adj[b].add(a)

    def merge(into, gone):
        for c in adj.pop(gone):
            if c != into:
                adj[c].discard(gone)
                adj[c].add(into)
                adj[into].add(c)
        adj[into].discard(gone)
        del bags[gone]

    def contract():
        nonlocal keep
        again = True
        while again:
            again = False
            for a in list(bags):
                for b in sorted(adj[a], key=repr):
                    if bags[b] <= bags[a]:
                        if b == keep:
                            if bags[a] <= bags[b]:
                                a, b = b, a
                            else:
                                keep = a
                        merge(a, b)
                        again = True
                        break
                if again:
                    break

    contract()
    while any(len(bag) < t for bag in bags.values()):
        for b in list(bags):
            if b not in bags or len(bags[b]) >= t:
                continue
            pool = set()
            for c in adj[b]:
                pool |= bags[c] - bags[b]
            if not adj[b]:
                pool = set(order) - bags[b]
            bags[b].add(min(pool, key=order.get))
        contract()

    chain = itertools.count()
    pairs = {frozenset((a, b)) for a in bags for b in adj[a]}
    for a, b in sorted((sorted(p, key=repr) for p in pairs), key=repr):
        leave = sorted(bags[a] - bags[b], key=order.get)
        enter = sorted(bags[b] - bags[a], key=order.get)
        if len(leave) <= 1:
            continue
        adj[a].discard(b)
        adj[b].discard(a)
        prev, cur = a, set(bags[a])
        for x, y in list(zip(leave, enter))[:-1]:
            cur = (cur - {x}) | {y}
            node = ("chain", next(chain))
            bags[node] = set(cur)
            adj[node] = {prev}
            adj[prev].add(node)
            prev = node
        adj[prev].add(b)
        adj[b].add(prev)
    return bags, adj, keep


class _Builder:
    """Emits operator nodes while tracking which vertex holds each label."""

    def __init__(self, t):
        self.t = t

    def gamma(self, node, lab):
        lab = lab[1:] + lab[:1]
        return op_gamma(node), lab

    def swap(self, node, lab):
        lab = [lab[1], lab[0]] + lab[2:]
        return op_i(node), lab

    def rotate_to(self, node, lab, v):
        while lab[0] != v:
            node, lab = self.gamma(node, lab)
        return node, lab

    def permute(self, node, lab, target):
        """Reorder labels so that label j sits on target[j-1]."""
        t = self.t
        if lab == list(target):
            return node, lab
        rank = {v: i for i, v in enumerate(target)}
        for _ in range(t - 1):
            if [rank[v] for v in lab] == sorted(rank[v] for v in lab):
                break
            for _ in range(t - 1):
                if rank[lab[0]] > rank[lab[1]]:
                    node, lab = self.swap(node, lab)
                node, lab = self.gamma(node, lab)
            node, lab = self.gamma(node, lab)
        return node, lab


def decomposition_to_parse_tree(
    g: BoundariedColoredGraph | ColoredGraph,
    td: TreeDecomposition,
    root_bag=None,
    t: int | None = None,
) -> ParseNode:
    """A parse tree whose value is color-isomorphic to ``g``.

    ``t`` defaults to width(td) + 1.  When ``root_bag`` names a node whose
    bag is exactly the boundary of ``g`` (and t equals g's boundary size),
    the value also carries g's boundary labels.
    """
    bg = g if isinstance(g, BoundariedColoredGraph) else BoundariedColoredGraph(g)
    cg = bg.graph
    check = validate(td, cg)
    if not check:
        raise ValueError(f"invalid tree decomposition: {check.message}")
    w = width(td)
    t = w + 1 if t is None else t
    if w > t - 1:
        raise ValueError(f"decomposition has width {w}, more than t - 1 = {t - 1}")
    if cg.edges and t < 2:
        raise ValueError("graphs with edges need t >= 2")
    if root_bag is not None and root_bag not in td.bags:
        raise ValueError(f"unknown root bag {root_bag!r}")
    bags, adj, root = smooth_decomposition(td, cg.vertices, t, keep=root_bag)
    if root is None:
        root = next(iter(bags))
    order = {v: i for i, v in enumerate(cg.vertices)}
    c_max = cg.c_max

    # Each edge is introduced at the first node (in preorder) holding both ends.
    kids, pre = {root: []}, [root]
    stack = [root]
    while stack:
        x = stack.pop()
        for y in sorted(adj[x], key=repr):
            if y not in kids:
                kids[y] = []
                kids[x].append(y)
                pre.append(y)
                stack.append(y)
    placed = set()
    at_node = {x: [] for x in bags}
    for x in pre:
        for e in sorted(cg.edges, key=lambda e: sorted(order[v] for v in e)):
            if e not in placed and e <= bags[x]:
                placed.add(e)
                at_node[x].append(tuple(sorted(e, key=order.get)))

    b = _Builder(t)

    def build(x):
        if not kids[x]:
            members = sorted(bags[x], key=lambda v: (cg.color[v], order[v]))
            counts = [sum(1 for v in members if cg.color[v] == c) for c in range(1, c_max + 1)]
            node, lab = empty(*counts), members
        else:
            acc = None
            for y in kids[x]:
                sub, lab_y = build(y)
                (gone,) = bags[y] - bags[x]
                (new,) = bags[x] - bags[y]
                sub, lab_y = b.rotate_to(sub, lab_y, gone)
                sub, lab_y = op_u(cg.color[new], sub), [new] + lab_y[1:]
                if acc is None:
                    acc = (sub, lab_y)
                else:
                    sub, lab_y = b.permute(sub, lab_y, acc[1])
                    acc = (op_glue(acc[0], sub), acc[1])
            node, lab = acc
        for u, v in at_node[x]:
            rest = [z for z in lab if z not in (u, v)]
            node, lab = b.permute(node, lab, [u, v] + rest)
            node = op_e(node)
        return node, lab

    node, lab = build(root)
    if set(lab) == bg.boundary and bg.t == t and root_bag is not None:
        node, lab = b.permute(node, lab, [bg.label[j] for j in range(1, t + 1)])
    return node
