"""Command-line front end: ``hynerode <command> ...``.

Reports are ``key: value`` lines (or one JSON object with ``--format
json``).  Exit status is 0 on success, 1 for a "no" answer or a failed
check, and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import random
import sys
from pathlib import Path

from . import boundaried as bd
from . import formats as fmt
from . import ghtw, layout, parsetree, testset, treedec
from .core import InstanceTooLarge, colored_isomorphic, incidence_graph, primal_graph


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _hypergraph(path: str) -> bd.BoundariedHypergraph:
    return fmt.read_boundaried_hypergraph(_read(path))


def _bool(x: bool) -> str:
    return "true" if x else "false"


# Each handler returns (report dict, exit code, optional raw text body).


def cmd_cutwidth(a):
    h = _hypergraph(a.file).hypergraph
    value, wit = layout.cutwidth_exact(h)
    rep = {"cutwidth": value}
    code = 0
    if a.k is not None:
        ok = value <= a.k
        rep["k"] = a.k
        rep["at-most-k"] = bool(ok)
        code = 0 if ok else 1
    body = None
    if a.witness:
        rep["witness"] = {str(v): p for v, p in sorted(wit.items(), key=lambda kv: kv[1])}
        body = "".join(f"{k}: {v}\n" for k, v in rep.items() if k != "witness") + "witness:\n" + fmt.write_layout(wit)
    return rep, code, body


def cmd_treewidth(a):
    h = _hypergraph(a.file).hypergraph
    g = incidence_graph(h) if a.incidence else primal_graph(h)
    w, _ = treedec.treewidth_exact(g)
    return {"graph": "incidence" if a.incidence else "primal", "nodes": len(g.vertices), "treewidth": w}, 0, None


def cmd_twb_transform(a):
    h = _hypergraph(a.file).hypergraph
    if a.layout:
        lay = fmt.read_layout(_read(a.layout), h.vertices)
    else:
        lay = layout.cutwidth_exact(h)[1]
    td = treedec.layout_to_incidence_decomposition(h, lay)
    inc = incidence_graph(h)
    ok = treedec.validate(td, inc)
    text = fmt.write_td(td, inc.vertices)
    rep = {"layout-cutwidth": layout.cutwidth_of_layout(h, lay), "width": treedec.width(td),
           "valid": bool(ok), "td": text}
    body = f"c layout-cutwidth {rep['layout-cutwidth']}\nc width {rep['width']}\nc valid {_bool(ok)}\n" + text
    return rep, 0 if ok else 1, body


def cmd_incidence(a):
    bh = _hypergraph(a.file)
    try:
        g = bd.incidence_of(bh)
    except ValueError:
        g = bd.BoundariedColoredGraph(incidence_graph(bh.hypergraph))
    text = fmt.write_colored_graph(_plain_names(g))
    return {"graph": text}, 0, text


def _plain_names(g: bd.BoundariedColoredGraph) -> bd.BoundariedColoredGraph:
    """Readable names for incidence nodes: vertex ids stay, hyperedges become e<ordinal>."""
    names = {}
    for v in g.graph.vertices:
        if isinstance(v, tuple) and len(v) == 2 and v[0] == "v":
            names[v] = str(v[1])
        elif isinstance(v, tuple) and len(v) == 2 and v[0] == "e":
            names[v] = f"e{v[1] + 1}"
        else:
            names[v] = str(v)
    if len(set(names.values())) != len(names):
        return g
    cg = g.graph
    new = bd.ColoredGraph([names[v] for v in cg.vertices], [{names[u] for u in e} for e in cg.edges],
                          {names[v]: c for v, c in cg.color.items()})
    return bd.BoundariedColoredGraph(new, {lab: names[v] for lab, v in g.label.items()})


def cmd_glue(a):
    if a.colored:
        g1 = fmt.read_colored_graph(_read(a.first))
        g2 = fmt.read_colored_graph(_read(a.second))
        out = bd.glue_graphs(g1, g2)
        text = fmt.write_colored_graph(out)
        rep = {"vertices": len(out.graph.vertices), "edges": len(out.graph.edges), "graph": text}
    else:
        out = bd.glue_hypergraphs(_hypergraph(a.first), _hypergraph(a.second))
        text = fmt.write_hypergraph(out)
        rep = {"vertices": out.hypergraph.n, "hyperedges": out.hypergraph.m, "hypergraph": text}
    return rep, 0, text


def cmd_lift(a):
    g = fmt.read_colored_graph(_read(a.file))
    h = bd.hypergraph_of(g)
    text = fmt.write_hypergraph(h)
    return {"vertices": h.hypergraph.n, "hyperedges": h.hypergraph.m, "hypergraph": text}, 0, text


def _graph_for_parse(a):
    if a.file.endswith(".cg"):
        return fmt.read_colored_graph(_read(a.file))
    bh = _hypergraph(a.file)
    if a.primal:
        return bd.BoundariedColoredGraph(primal_graph(bh.hypergraph))
    try:
        return bd.incidence_of(bh)
    except ValueError:
        return bd.BoundariedColoredGraph(incidence_graph(bh.hypergraph))


def cmd_parse(a):
    if a.action == "eval":
        src = a.target
        text = _read(src) if Path(src).exists() else src
        node = parsetree.parse_sexpr(text)
        g = parsetree.eval_parse_tree(node, a.t)
        out = fmt.write_colored_graph(g)
        return {"t": g.t, "vertices": len(g.graph.vertices), "edges": len(g.graph.edges), "graph": out}, 0, out
    a.file = a.target
    g = _graph_for_parse(a)
    if a.td:
        td = fmt.read_td(_read(a.td), g.graph.vertices)
    else:
        td = treedec.treewidth_exact(g.graph)[1]
    w = treedec.width(td)
    t = a.t if a.t is not None else w + 1
    node = parsetree.decomposition_to_parse_tree(g, td, t=t)
    if a.action == "from-td":
        s = parsetree.format_sexpr(node)
        return {"t": t, "width": w, "nodes": node.size(), "tree": s}, 0, s + "\n"
    val = parsetree.eval_parse_tree(node, t)
    iso = colored_isomorphic(val.graph, g.graph)
    return {"t": t, "width": w, "nodes": node.size(), "isomorphic": iso}, 0 if iso else 1, None


def cmd_test(a):
    if a.action == "make":
        bh = _hypergraph(a.file)
        lay = fmt.read_layout(_read(a.layout), bh.hypergraph.vertices)
        t = testset.make_h_test(bh, lay, a.k, symmetric=a.symmetric)
        text = fmt.write_test(t)
        return {"test": text}, 0, text
    if a.action == "shrink":
        t = fmt.read_test(_read(a.file))
        r = testset.shrink(t)
        text = fmt.write_test(r)
        return {"size-before": t.n, "size-after": r.n, "test": text}, 0, text
    if a.action == "pass":
        bh = _hypergraph(a.file)
        t = fmt.read_test(_read(a.tests[0]))
        res = testset.passes(bh, t)
        rep = {"passes": res.ok}
        body = None
        if res.ok:
            rep["witness"] = {str(v): str(p) for v, p in sorted(res.layout.items(), key=lambda kv: kv[1])}
            body = "passes: true\nwitness:\n" + fmt.write_layout(res.layout)
        return rep, 0 if res.ok else 1, body
    bh = _hypergraph(a.file)
    tests = [fmt.read_test(_read(p)) for p in a.tests]
    sig = testset.test_signature(bh, tests)
    return {"tests": len(tests), "signature": "".join("1" if b else "0" for b in sig)}, 0, None


def cmd_congruence(a):
    g1, g2 = _hypergraph(a.first), _hypergraph(a.second)
    partners = [_hypergraph(p) for p in a.partners or []]
    if a.random:
        rng = random.Random(a.seed)
        partners += [random_partner(rng, g1) for _ in range(a.random)]
    res = testset.congruent_sample(g1, g2, a.k, partners)
    rep = {"k": a.k, "partners": len(partners), "skipped": res.skipped, "congruent": res.ok}
    if not res.ok:
        rep["partner"] = partners.index(res.partner) + 1
    return rep, 0 if res.ok else 1, None


def random_partner(rng: random.Random, like: bd.BoundariedHypergraph, max_free: int = 3) -> bd.BoundariedHypergraph:
    """Random partner gluable to ``like`` (same label kinds)."""
    vs = [f"p{lab}" for lab in sorted(like.vlabel)]
    vlabel = {lab: f"p{lab}" for lab in sorted(like.vlabel)}
    vs += [f"q{i}" for i in range(rng.randint(0, max_free))]
    edges, elabel = [], {}
    for lab in sorted(like.elabel):
        elabel[lab] = len(edges)
        edges.append({v for v in vs if rng.random() < 0.4})
    for _ in range(rng.randint(0, 3)):
        if len(vs) >= 2:
            edges.append(set(rng.sample(vs, rng.randint(2, min(3, len(vs))))))
    return bd.BoundariedHypergraph(bd.Hypergraph(vs, edges), vlabel, elabel)


def cmd_ghtw(a):
    if a.n < 1:
        raise UsageError("--n must be at least 1")
    if a.action == "build":
        h = ghtw.build_hn_extended(a.n) if a.extended else ghtw.build_hn(a.n)
        text = fmt.write_hypergraph(h)
        return {"n": a.n, "labels": h.t, "vertices": h.hypergraph.n, "hyperedges": h.hypergraph.m,
                "hypergraph": text}, 0, text
    rows = ghtw.verify_hn(a.n)
    rep = {"n": a.n}
    for name, ok, detail in rows:
        rep[name] = f"{'PASS' if ok else 'FAIL'} {detail}"
    allok = all(ok for _, ok, _ in rows)
    rep["result"] = "PASS" if allok else "FAIL"
    return rep, 0 if allok else 1, None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hynerode", description=__doc__.splitlines()[0])
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized inputs (default 0)")
    # The same options after the subcommand; SUPPRESS keeps them from clobbering the top level.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    s = add("cutwidth", help="exact cutwidth of a hypergraph")
    s.add_argument("file")
    s.add_argument("--k", type=int)
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=cmd_cutwidth)

    s = add("treewidth", help="exact treewidth of the primal or incidence graph")
    s.add_argument("file")
    s.add_argument("--incidence", action="store_true")
    s.set_defaults(func=cmd_treewidth)

    s = add("twb-transform", help="incidence tree decomposition from a layout")
    s.add_argument("file")
    s.add_argument("--layout")
    s.set_defaults(func=cmd_twb_transform)

    s = add("incidence", help="print the incidence graph")
    s.add_argument("file")
    s.set_defaults(func=cmd_incidence)

    s = add("glue", help="glue two boundaried hypergraphs (or colored graphs)")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--colored", action="store_true")
    s.set_defaults(func=cmd_glue)

    s = add("lift", help="hypergraph of a two-colored boundaried graph")
    s.add_argument("file")
    s.set_defaults(func=cmd_lift)

    s = add("parse", help="parse trees: eval, from-td, roundtrip")
    s.add_argument("action", choices=["eval", "from-td", "roundtrip"])
    s.add_argument("target", help="s-expression (file or literal) for eval, graph file otherwise")
    s.add_argument("--t", type=int)
    s.add_argument("--td")
    s.add_argument("--primal", action="store_true", help="use the primal instead of the incidence graph")
    s.set_defaults(func=cmd_parse)

    s = add("test", help="tests: make, shrink, pass, signature")
    s.add_argument("action", choices=["make", "shrink", "pass", "signature"])
    s.add_argument("file")
    s.add_argument("tests", nargs="*")
    s.add_argument("--layout")
    s.add_argument("--k", type=int)
    s.add_argument("--symmetric", action="store_true")
    s.set_defaults(func=cmd_test)

    s = add("congruence", help="probe gluing equivalence against partners")
    s.add_argument("first")
    s.add_argument("second")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--partners", nargs="*")
    s.add_argument("--random", type=int, default=0, help="number of random partners to add")
    s.set_defaults(func=cmd_congruence)

    s = add("ghtw", help="the H_n family")
    s.add_argument("action", choices=["build", "verify"])
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--extended", action="store_true")
    s.set_defaults(func=cmd_ghtw)
    return p


def _check_args(a):
    if a.command == "test":
        if a.action == "make" and (a.layout is None or a.k is None):
            raise UsageError("test make needs --layout and --k")
        if a.action in ("pass", "signature") and not a.tests:
            raise UsageError(f"test {a.action} needs at least one test file")
        if a.action == "pass" and len(a.tests) != 1:
            raise UsageError("test pass takes exactly one test file")


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            a = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        _check_args(a)
        rep, code, body = a.func(a)
    except (UsageError, fmt.FormatError, parsetree.ParseError, InstanceTooLarge, ValueError) as exc:
        print(f"error: {exc}", file=err)
        return 2
    if a.format == "json":
        out.write(json.dumps(rep, sort_keys=False) + "\n")
    elif body is not None:
        out.write(body)
    else:
        for k, v in rep.items():
            out.write(f"{k}: {_bool(v) if isinstance(v, bool) else v}\n")
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
