"""Line-oriented text formats for hypergraphs, colored graphs, layouts,
tree decompositions and tests.

Every reader skips blank lines and lines starting with ``#`` and raises
:class:`FormatError` carrying the offending line number.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .boundaried import BoundariedColoredGraph, BoundariedHypergraph
from .core import ColoredGraph, Hypergraph


class FormatError(ValueError):
    def __init__(self, lineno: int | None, msg: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield no, line.split()


def _int(tok: str, no: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(no, f"{what} must be an integer, got {tok!r}") from None


def _names(vertices: Sequence) -> dict:
    """Whitespace-free, pairwise distinct text names for vertex ids."""
    names = {v: "".join(str(v).split()) or "_" for v in vertices}
    if len(set(names.values())) != len(names):
        names = {v: f"v{i}" for i, v in enumerate(vertices, start=1)}
    return names


# -- hypergraphs ----------------------------------------------------------------


def read_boundaried_hypergraph(text: str) -> BoundariedHypergraph:
    header = None
    vertices, edges = [], []
    vlabel, elabel = {}, {}
    seen_labels = set()
    for no, tok in _lines(text):
        kind = tok[0]
        if header is None:
            if kind != "p" or len(tok) != 4 or tok[1] != "hg":
                raise FormatError(no, "expected header 'p hg <n> <m>'")
            header = (_int(tok[2], no, "n"), _int(tok[3], no, "m"))
            vset = set()
            continue
        if kind == "v":
            if len(tok) != 2:
                raise FormatError(no, "expected 'v <id>'")
            if edges:
                raise FormatError(no, "vertex declared after hyperedges")
            if tok[1] in vset:
                raise FormatError(no, f"duplicate vertex {tok[1]!r}")
            if len(vertices) == header[0]:
                raise FormatError(no, f"more than {header[0]} vertices")
            vertices.append(tok[1])
            vset.add(tok[1])
        elif kind == "e":
            for v in tok[1:]:
                if v not in vset:
                    raise FormatError(no, f"hyperedge references undeclared vertex {v!r}")
            if len(edges) == header[1]:
                raise FormatError(no, f"more than {header[1]} hyperedges")
            edges.append(frozenset(tok[1:]))
        elif kind == "b":
            if len(tok) != 4 or tok[1] not in ("v", "e"):
                raise FormatError(no, "expected 'b v <label> <id>' or 'b e <label> <ordinal>'")
            lab = _int(tok[2], no, "label")
            if lab < 1:
                raise FormatError(no, "labels are positive")
            if lab in seen_labels:
                raise FormatError(no, f"duplicate label {lab}")
            seen_labels.add(lab)
            if tok[1] == "v":
                if tok[3] not in vset:
                    raise FormatError(no, f"label on undeclared vertex {tok[3]!r}")
                if tok[3] in vlabel.values():
                    raise FormatError(no, f"vertex {tok[3]!r} already labeled")
                vlabel[lab] = tok[3]
            else:
                ordinal = _int(tok[3], no, "hyperedge ordinal")
                if not 1 <= ordinal <= header[1]:
                    raise FormatError(no, f"hyperedge ordinal {ordinal} out of range 1..{header[1]}")
                if ordinal - 1 in elabel.values():
                    raise FormatError(no, f"hyperedge {ordinal} already labeled")
                elabel[lab] = ordinal - 1
        else:
            raise FormatError(no, f"unknown line type {kind!r}")
    if header is None:
        raise FormatError(None, "missing header 'p hg <n> <m>'")
    if len(vertices) != header[0] or len(edges) != header[1]:
        raise FormatError(None, f"header announces {header[0]} vertices and {header[1]} hyperedges, "
                                f"found {len(vertices)} and {len(edges)}")
    return BoundariedHypergraph(Hypergraph(vertices, edges), vlabel, elabel)


def read_hypergraph(text: str) -> Hypergraph:
    return read_boundaried_hypergraph(text).hypergraph


def write_hypergraph(h: Hypergraph | BoundariedHypergraph) -> str:
    bh = h if isinstance(h, BoundariedHypergraph) else BoundariedHypergraph(h)
    hg = bh.hypergraph
    names = _names(hg.vertices)
    out = [f"p hg {hg.n} {hg.m}"]
    out += [f"v {names[v]}" for v in hg.vertices]
    for e in hg.edges:
        members = [names[v] for v in hg.vertices if v in e]
        out.append(" ".join(["e"] + members))
    for lab in sorted(bh.labels):
        if lab in bh.vlabel:
            out.append(f"b v {lab} {names[bh.vlabel[lab]]}")
        else:
            out.append(f"b e {lab} {bh.elabel[lab] + 1}")
    return "\n".join(out) + "\n"


# -- colored graphs --------------------------------------------------------------


def read_colored_graph(text: str) -> BoundariedColoredGraph:
    """``p cg n m`` then ``v id color``, ``e u w`` and ``b label id`` lines."""
    header = None
    vertices, color, edges, label = [], {}, [], {}
    for no, tok in _lines(text):
        if header is None:
            if tok[0] != "p" or len(tok) != 4 or tok[1] != "cg":
                raise FormatError(no, "expected header 'p cg <n> <m>'")
            header = (_int(tok[2], no, "n"), _int(tok[3], no, "m"))
            continue
        kind = tok[0]
        if kind == "v":
            if len(tok) not in (2, 3):
                raise FormatError(no, "expected 'v <id> [color]'")
            if tok[1] in color:
                raise FormatError(no, f"duplicate vertex {tok[1]!r}")
            c = _int(tok[2], no, "color") if len(tok) == 3 else 1
            if c < 1:
                raise FormatError(no, "colors are positive")
            vertices.append(tok[1])
            color[tok[1]] = c
        elif kind == "e":
            if len(tok) != 3:
                raise FormatError(no, "expected 'e <u> <w>'")
            for v in tok[1:]:
                if v not in color:
                    raise FormatError(no, f"edge references undeclared vertex {v!r}")
            if tok[1] == tok[2]:
                raise FormatError(no, "self-loop")
            edges.append((tok[1], tok[2]))
        elif kind == "b":
            if len(tok) != 3:
                raise FormatError(no, "expected 'b <label> <id>'")
            lab = _int(tok[1], no, "label")
            if lab in label:
                raise FormatError(no, f"duplicate label {lab}")
            if tok[2] not in color:
                raise FormatError(no, f"label on undeclared vertex {tok[2]!r}")
            label[lab] = tok[2]
        else:
            raise FormatError(no, f"unknown line type {kind!r}")
    if header is None:
        raise FormatError(None, "missing header 'p cg <n> <m>'")
    if len(vertices) != header[0] or len(edges) != header[1]:
        raise FormatError(None, "vertex or edge count does not match the header")
    try:
        return BoundariedColoredGraph(ColoredGraph(vertices, edges, color), label)
    except ValueError as exc:
        raise FormatError(None, str(exc)) from None


def write_colored_graph(g: BoundariedColoredGraph | ColoredGraph) -> str:
    bg = g if isinstance(g, BoundariedColoredGraph) else BoundariedColoredGraph(g)
    cg = bg.graph
    names = _names(cg.vertices)
    rank = {v: i for i, v in enumerate(cg.vertices)}
    out = [f"p cg {len(cg.vertices)} {len(cg.edges)}"]
    out += [f"v {names[v]} {cg.color[v]}" for v in cg.vertices]
    pairs = sorted((tuple(sorted(e, key=rank.get)) for e in cg.edges), key=lambda p: (rank[p[0]], rank[p[1]]))
    out += [f"e {names[u]} {names[w]}" for u, w in pairs]
    out += [f"b {lab} {names[v]}" for lab, v in sorted(bg.label.items())]
    return "\n".join(out) + "\n"


# -- layouts ---------------------------------------------------------------------


def read_layout(text: str, vertices: Iterable | None = None) -> dict:
    """``<vertex> <position>`` lines; positions are integers or fractions a/b."""
    pos = {}
    for no, tok in _lines(text):
        if len(tok) != 2:
            raise FormatError(no, "expected '<vertex> <position>'")
        try:
            p = Fraction(tok[1])
        except (ValueError, ZeroDivisionError):
            raise FormatError(no, f"bad position {tok[1]!r}") from None
        if tok[0] in pos:
            raise FormatError(no, f"vertex {tok[0]!r} placed twice")
        pos[tok[0]] = p
    if vertices is not None:
        vs = set(vertices)
        if set(pos) != vs:
            raise FormatError(None, "layout does not cover exactly the hypergraph's vertices")
    return {v: int(p) if p.denominator == 1 else p for v, p in pos.items()}


def write_layout(layout: dict, names: dict | None = None) -> str:
    names = names or _names(list(layout))
    items = sorted(layout.items(), key=lambda kv: kv[1])
    return "".join(f"{names[v]} {p}\n" for v, p in items)


# -- tree decompositions ---------------------------------------------------------


def write_td(td, nodes: Sequence) -> str:
    """Numbered format: graph nodes are 1..n in the order of ``nodes``."""
    num = {v: i for i, v in enumerate(nodes, start=1)}
    ids = {b: i for i, b in enumerate(td.nodes, start=1)}
    width1 = max((len(b) for b in td.bags.values()), default=0)
    out = [f"s td {len(ids)} {width1} {len(nodes)}"]
    for b, i in ids.items():
        out.append(" ".join(["b", str(i)] + [str(x) for x in sorted(num[v] for v in td.bags[b])]))
    out += [f"{ids[a]} {ids[b]}" for a, b in td.tree_edges]
    return "\n".join(out) + "\n"


def read_td(text: str, nodes: Sequence):
    from .treedec import TreeDecomposition

    header = None
    bags, edges = {}, []
    for no, tok in _lines(text):
        if header is None:
            if tok[:2] != ["s", "td"] or len(tok) != 5:
                raise FormatError(no, "expected header 's td <bags> <width+1> <n>'")
            header = [_int(x, no, "header field") for x in tok[2:]]
            if header[2] != len(nodes):
                raise FormatError(no, f"decomposition is for {header[2]} nodes, graph has {len(nodes)}")
            continue
        if tok[0] == "b":
            bid = _int(tok[1], no, "bag id")
            members = []
            for x in tok[2:]:
                j = _int(x, no, "bag member")
                if not 1 <= j <= len(nodes):
                    raise FormatError(no, f"bag member {j} out of range")
                members.append(nodes[j - 1])
            bags[bid] = frozenset(members)
        elif len(tok) == 2:
            edges.append((_int(tok[0], no, "bag id"), _int(tok[1], no, "bag id")))
        else:
            raise FormatError(no, "expected a bag line or an edge line")
    if header is None:
        raise FormatError(None, "missing td header")
    for a, b in edges:
        if a not in bags or b not in bags:
            raise FormatError(None, f"tree edge {a}-{b} references an unknown bag")
    return TreeDecomposition(bags, edges)


# -- tests -----------------------------------------------------------------------


def write_test(test) -> str:
    out = [f"t {test.n} {test.k}"]
    out += [f"pi {lab} {p}" for lab, p in sorted(test.pi.items())]
    for i, (w, labels) in enumerate(test.S):
        out.append(" ".join(["s", str(i), str(w)] + [str(x) for x in sorted(labels)]))
    return "\n".join(out) + "\n"


def read_test(text: str):
    from .testset import Test

    header = None
    pi, rows = {}, {}
    for no, tok in _lines(text):
        if header is None:
            if tok[0] != "t" or len(tok) != 3:
                raise FormatError(no, "expected header 't <n> <k>'")
            header = (_int(tok[1], no, "n"), _int(tok[2], no, "k"))
            continue
        if tok[0] == "pi":
            if len(tok) != 3:
                raise FormatError(no, "expected 'pi <label> <pos>'")
            lab = _int(tok[1], no, "label")
            if lab in pi:
                raise FormatError(no, f"duplicate label {lab}")
            pi[lab] = _int(tok[2], no, "position")
        elif tok[0] == "s":
            if len(tok) < 3:
                raise FormatError(no, "expected 's <i> <w> [labels...]'")
            i = _int(tok[1], no, "index")
            if i in rows:
                raise FormatError(no, f"duplicate entry {i}")
            rows[i] = (_int(tok[2], no, "load"), frozenset(_int(x, no, "label") for x in tok[3:]))
        else:
            raise FormatError(no, f"unknown line type {tok[0]!r}")
    if header is None:
        raise FormatError(None, "missing header 't <n> <k>'")
    n, k = header
    if sorted(rows) != list(range(n + 1)):
        raise FormatError(None, f"need exactly the entries s 0 .. s {n}")
    try:
        return Test(pi, tuple(rows[i] for i in range(n + 1)), k)
    except ValueError as exc:
        raise FormatError(None, str(exc)) from None
