import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_hypergraph
from hynerode.core import (
    ColoredGraph,
    Hypergraph,
    InstanceTooLarge,
    colored_isomorphic,
    colored_isomorphism,
    graph,
    incidence_graph,
    isomorphic,
    primal_graph,
)


def edges_of(g):
    return {frozenset(e) for e in g.edges}


def test_hypergraph_allows_empty_singleton_and_duplicate_edges():
    h = Hypergraph(["a", "b"], [set(), {"a"}, {"a", "b"}, {"a", "b"}])
    assert h.m == 4 and h.n == 2
    assert h.dedup().m == 3


def test_hypergraph_rejects_bad_input():
    with pytest.raises(ValueError):
        Hypergraph(["a", "a"], [])
    with pytest.raises(ValueError):
        Hypergraph(["a"], [{"a", "z"}])


def test_hypergraph_equality_is_multiset_equality():
    h1 = Hypergraph(["a", "b", "c"], [{"a", "b"}, {"b", "c"}])
    h2 = Hypergraph(["c", "b", "a"], [{"b", "c"}, {"a", "b"}])
    h3 = Hypergraph(["a", "b", "c"], [{"a", "b"}, {"b", "c"}, {"b", "c"}])
    assert h1 == h2 and hash(h1) == hash(h2)
    assert h1 != h3


def test_colored_graph_validation():
    with pytest.raises(ValueError):
        ColoredGraph([1], [{1}])
    with pytest.raises(ValueError):
        ColoredGraph([1, 2], [{1, 3}])
    with pytest.raises(ValueError):
        ColoredGraph([1, 2], [{1, 2}], {1: 1, 2: 0})
    g = ColoredGraph([1, 2], [{1, 2}])
    assert g.c_max == 1 and g.adjacency() == {1: {2}, 2: {1}}


def test_incidence_graph_empty():
    g = incidence_graph(Hypergraph())
    assert not g.vertices and not g.edges


def test_incidence_graph_single_edge_is_a_path():
    g = incidence_graph(Hypergraph(["a", "b"], [{"a", "b"}]))
    assert len(g.vertices) == 3 and len(g.edges) == 2
    assert sorted(g.color.values()) == [1, 1, 2]


def test_incidence_graph_of_fig4_counts():
    v = [f"v{i}" for i in range(1, 13)]
    edges = [{1, 2, 3, 4}, {5, 6, 7, 8}, {9, 10, 11, 12}, {2, 3, 11, 12}, {7, 9, 10}]
    h = Hypergraph(v, [{f"v{i}" for i in e} for e in edges])
    g = incidence_graph(h)
    assert len(g.vertices) == 17
    assert len(g.edges) == sum(len(e) for e in edges) == 19


def test_incidence_graph_duplicates_get_distinct_nodes():
    g = incidence_graph(Hypergraph(["a", "b"], [{"a", "b"}, {"a", "b"}]))
    assert len(g.vertices) == 4 and len(g.edges) == 4


@pytest.mark.parametrize("edges,expected", [
    ([{"a", "b", "c"}], {("a", "b"), ("a", "c"), ("b", "c")}),
    ([{"a", "b"}, {"c", "d"}], {("a", "b"), ("c", "d")}),
    ([{"a", "b"}, {"b", "c"}, {"a", "b", "c"}], {("a", "b"), ("a", "c"), ("b", "c")}),
])
def test_primal_graph_examples(edges, expected):
    h = Hypergraph(["a", "b", "c", "d"], edges)
    assert edges_of(primal_graph(h)) == {frozenset(e) for e in expected}


def test_isomorphic_renaming_and_multiplicity():
    h = Hypergraph(["a", "b", "c"], [{"a", "b"}, {"b", "c"}, {"a", "b", "c"}])
    r = h.rename({"a": 3, "b": 1, "c": 2})
    assert isomorphic(h, r)
    assert not isomorphic(Hypergraph(["a", "b"], [{"a", "b"}]), Hypergraph(["a", "b"], [{"a", "b"}, {"a", "b"}]))


def test_isomorphic_size_limit():
    big = Hypergraph(range(13), [])
    with pytest.raises(InstanceTooLarge):
        isomorphic(big, big)


def _brute_iso(h1, h2):
    if h1.n != h2.n or h1.m != h2.m:
        return False
    target = sorted(sorted(map(str, e)) for e in h2.edges)
    for perm in itertools.permutations(h2.vertices):
        f = dict(zip(h1.vertices, perm))
        if sorted(sorted(str(f[v]) for v in e) for e in h1.edges) == target:
            return True
    return False


def test_isomorphic_matches_permutation_oracle():
    rng = random.Random(3)
    agree = 0
    for _ in range(150):
        h1 = random_hypergraph(rng, 6, 4, min_v=4)
        if rng.random() < 0.5:
            perm = list(h1.vertices)
            rng.shuffle(perm)
            h2 = h1.rename(dict(zip(h1.vertices, perm)))
            if rng.random() < 0.5 and h2.m:
                # perturb one hyperedge
                edges = list(h2.edges)
                edges[0] = set(rng.sample(h2.vertices, rng.randint(0, h2.n)))
                h2 = Hypergraph(h2.vertices, edges)
        else:
            h2 = random_hypergraph(rng, h1.n, 4, min_v=h1.n)
        agree += isomorphic(h1, h2) == _brute_iso(h1, h2)
    assert agree == 150


def test_colored_isomorphism_respects_colors_and_fixed_points():
    g1 = ColoredGraph([1, 2, 3], [{1, 2}, {2, 3}], {1: 1, 2: 2, 3: 1})
    g2 = ColoredGraph(["x", "y", "z"], [{"x", "y"}, {"y", "z"}], {"x": 2, "y": 1, "z": 1})
    assert not colored_isomorphic(g1, g2)
    g3 = ColoredGraph(["x", "y", "z"], [{"x", "y"}, {"y", "z"}], {"x": 1, "y": 2, "z": 1})
    f = colored_isomorphism(g1, g3, fixed={1: "z"})
    assert f == {1: "z", 2: "y", 3: "x"}


def test_graph_helper_gives_one_color():
    g = graph("abc", [("a", "b")])
    assert set(g.color.values()) == {1}


hypergraphs = st.integers(0, 6).flatmap(
    lambda n: st.lists(st.sets(st.integers(0, n - 1), max_size=n) if n else st.just(set()), max_size=6).map(
        lambda es: Hypergraph(range(n), es)))


@settings(max_examples=60, deadline=None)
@given(hypergraphs)
def test_primal_ignores_duplicates_and_incidence_is_bipartite(h):
    assert primal_graph(h) == primal_graph(h.dedup())
    g = incidence_graph(h)
    assert all(len({g.color[v] for v in e}) == 2 for e in g.edges)
