import itertools
import random
from dataclasses import replace

import pytest

from helpers import random_hypergraph
from hynerode.core import Hypergraph, InstanceTooLarge, incidence_graph, primal_graph
from hynerode.ghtw import (
    boundary_objects,
    build_hn,
    build_hn_extended,
    canonical_bags,
    canonical_good_decomposition,
    count_switches,
    cover_width,
    covers,
    edge_index,
    ghw_by_elimination_orders,
    ghw_exact,
    ghw_of_decomposition,
    hn_edges,
    incidence_decomposition_hn,
    is_good,
    signature_of,
    verify_hn,
)
from hynerode.treedec import TreeDecomposition, validate, width


def edges_by_name(n):
    return dict(hn_edges(n))


# -- cover width and exact GHW ------------------------------------------------


def test_cover_width_basics():
    h = Hypergraph("abcd", ["ab", "cd", "bc"])
    assert cover_width("abcd", h) == (2, (0, 1))
    assert cover_width("bc", h)[0] == 1
    assert cover_width([], h) == (0, ())
    with pytest.raises(ValueError):
        cover_width("z", Hypergraph("az", ["a"]))


def test_cover_width_matches_subset_scan():
    rng = random.Random(30)
    for _ in range(60):
        h = random_hypergraph(rng, 7, 6)
        used = set().union(*h.edges) if h.edges else set()
        bag = {v for v in used if rng.random() < 0.6}
        k, cov = cover_width(bag, h)
        assert covers(bag, h, cov) and len(cov) == k
        best = min(r for r in range(h.m + 1)
                   for c in itertools.combinations(range(h.m), r) if covers(bag, h, c))
        assert k == best


def test_ghw_small_examples():
    assert ghw_exact(Hypergraph("abcd", ["abcd", "ab"])) == 1
    assert ghw_exact(Hypergraph("abc", ["ab", "bc", "ac"])) == 2
    assert ghw_exact(Hypergraph("abcd", ["ab", "bc", "cd", "da"])) == 2
    assert ghw_exact(Hypergraph("abc", [])) == 0
    assert ghw_exact(Hypergraph("ab", ["ab"])) == 1


def test_ghw_matches_elimination_scan_and_decompositions():
    rng = random.Random(31)
    for _ in range(50):
        h = random_hypergraph(rng, 7, 6)
        value = ghw_exact(h)
        assert value == ghw_by_elimination_orders(h)
        g = primal_graph(h)
        single = TreeDecomposition({0: g.vertices})
        assert ghw_of_decomposition(h, single) >= value


def test_ghw_limits():
    big = Hypergraph(range(13), [set(range(13))])
    with pytest.raises(InstanceTooLarge):
        ghw_exact(big)
    with pytest.raises(ValueError):
        ghw_of_decomposition(Hypergraph("ab", ["ab"]), TreeDecomposition({0: "a", 1: "b"}, [(0, 1)]))


# -- the family H_n -------------------------------------------------------------


def test_hn_shape():
    h = build_hn(1)
    assert h.t == 28 and h.hypergraph.n == 28
    assert len(h.vlabel) == 16 and len(h.elabel) == 12
    names = [name for name, _ in hn_edges(1)]
    assert sum(name.startswith("B_S") for name in names) == 28
    assert sum(name.startswith("B_T") for name in names) == 28
    assert build_hn(2).hypergraph.n == 34
    with pytest.raises(ValueError):
        build_hn(0)


def test_hn_two_transcription():
    e = edges_by_name(2)
    for name in ("E_1,2", "E_2,3", "E_7,8", "E_8,9"):
        assert {"a", "b"} <= e[name]
    for name in ("E_4,5", "E_5,6", "E_10,11", "E_11,12"):
        assert {"c", "d"} <= e[name]
    for name in ("E_3,4", "E_6,7", "E_9,10"):
        assert len(e[name]) == 2
    for i in (3, 6, 9):
        assert e[f"E_{i}"] == {"a", "c", "y", f"x{i}"}
        assert e[f"E_{i + 1}"] == {"b", "d", "z", f"x{i + 1}"}
    assert e["E_1"] == {"s8", "x1"} and e["E_12"] == {"x12", "t1"}


def test_extended_variant():
    ext, plain = build_hn_extended(1), build_hn(1)
    assert ext.t == 41
    assert ext.hypergraph.n == plain.hypergraph.n + 13
    assert ext.hypergraph.edges == plain.hypergraph.edges
    assert len(boundary_objects(ext)) == 41


def test_canonical_covers():
    idx = edge_index(1)
    rows = {i: (bag, cov) for i, bag, cov in canonical_bags(1)}
    assert set(rows[3][1]) == {"E_3", "E_4"}
    assert set(rows[6][1]) == {"E_6", "A", "B"}
    hg = build_hn(1).hypergraph
    assert cover_width(rows[-1][0], hg)[0] == 4
    assert cover_width(rows[1][0], hg)[0] == 3
    for _, (bag, cov) in rows.items():
        assert covers(bag, hg, [idx[c] for c in cov])


def test_count_switches():
    CD, AB, NONE = (True, False), (False, True), (False, False)
    assert count_switches([CD, AB, CD, AB]) == 2
    assert count_switches([CD, NONE, AB]) == 1
    assert count_switches([AB, NONE, AB]) == 0
    assert count_switches([CD, AB, AB]) == 1
    assert count_switches([]) == 0


@pytest.mark.parametrize("n", [1, 2])
def test_canonical_decomposition_is_good(n):
    gd = canonical_good_decomposition(n)
    assert is_good(gd)
    assert signature_of(gd) == n
    assert validate(gd.td, primal_graph(gd.h.hypergraph))
    assert gd.backbone()[0] == -1 and gd.backbone()[-1] == 6 * n + 1


def test_is_good_rejects_four_inner_hyperedges():
    gd = canonical_good_decomposition(1)
    idx = edge_index(1)
    cover = dict(gd.cover)
    cover[3] = frozenset({idx["E_3"], idx["E_4"], idx["E_1"], idx["E_6"]})
    res = is_good(replace(gd, cover=cover))
    assert not res and res.condition == "size"
    cover[3] = frozenset({idx["E_3"], idx["E_4"], idx["E_1"]})
    assert is_good(replace(gd, cover=cover)).condition == "boundary"


@pytest.mark.parametrize("n", [1, 2])
def test_incidence_decompositions(n):
    h = build_hn(n)
    inc = incidence_graph(h.hypergraph)
    plain = incidence_decomposition_hn(n)
    assert validate(plain, inc) and width(plain) <= 12
    rooted = incidence_decomposition_hn(n, rooted_at_boundary=True)
    assert validate(rooted, inc) and width(rooted) <= 40
    assert boundary_objects(h) in set(rooted.bags.values())
    ext = build_hn_extended(n)
    td = incidence_decomposition_hn(n, rooted_at_boundary=True, extended=True)
    assert validate(td, incidence_graph(ext.hypergraph)) and width(td) <= 40
    assert boundary_objects(ext) in set(td.bags.values())


@pytest.mark.parametrize("n", [1, 2, 3])
def test_verify_hn_all_pass(n):
    report = verify_hn(n)
    assert all(ok for _, ok, _ in report), [r for r in report if not r[1]]
