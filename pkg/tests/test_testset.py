import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA
from helpers import graph_for_test, random_gluable_pair
from hynerode import formats as fmt
from hynerode.boundaried import BoundariedHypergraph, glue_hypergraphs
from hynerode.core import Hypergraph
from hynerode.layout import cut_at, decide_cutwidth
from hynerode.testset import (
    Test,
    congruent_sample,
    distinguishing_test,
    empty_boundaried,
    gluing_is_compatible,
    h_tests,
    in_cut,
    is_reduced,
    joint_cut,
    joint_cutwidth,
    load_patterns,
    make_h_test,
    passes,
    random_test,
    reduced_tests,
    shrink,
    size_bound,
    straits,
    test_signature,
)


def S(*rows):
    return tuple((w, frozenset(E)) for w, E in rows)


def load(name):
    return fmt.read_boundaried_hypergraph((DATA / name).read_text())


# -- the Test type ------------------------------------------------------------


def test_test_invariants():
    with pytest.raises(ValueError):
        Test({}, S((0, {1}), (0, set()), (0, {1})), 1)  # not an interval
    with pytest.raises(ValueError):
        Test({}, S((2, set())), 1)  # load above k
    with pytest.raises(ValueError):
        Test({1: 1, 2: 1}, S((0, set()), (0, set())), 1)  # two labels, one position
    with pytest.raises(ValueError):
        Test({1: 1}, S((0, set()), (0, {1})), 1)  # label is both a position and a hyperedge
    with pytest.raises(ValueError):
        Test({1: 2}, S((0, set()), (0, set())), 1)  # position beyond n
    with pytest.raises(ValueError):
        Test({}, (), 1)


# -- H-tests ------------------------------------------------------------------


def test_h_test_of_empty_hypergraph():
    t = make_h_test(empty_boundaried(), {}, 1)
    assert t.S == S((0, set())) and t.pi == {}


def test_h_test_of_single_edge():
    h = BoundariedHypergraph(Hypergraph(["v1", "v2"], [{"v1", "v2"}]))
    assert make_h_test(h, {"v1": 1, "v2": 2}, 1).S == S((0, set()), (1, set()), (0, set()))


def test_h_test_asymmetry_and_symmetric_variant():
    h = load("fig3b.hg")
    lay = fmt.read_layout((DATA / "fig6.layout").read_text())
    literal = make_h_test(h, lay, 2)
    sym = make_h_test(h, lay, 2, symmetric=True)
    assert literal.E[6] == {3} and sym.E[6] == frozenset()
    assert literal.w == sym.w == (0, 1, 1, 2, 1, 1, 0)


def test_h_test_rejects_loads_above_k():
    h = BoundariedHypergraph(Hypergraph("ab", ["ab", "ab"]))
    with pytest.raises(ValueError):
        make_h_test(h, {"a": 1, "b": 2}, 1)
    assert h_tests(h, 1) == []
    assert len(h_tests(h, 2)) == 1


def test_h_tests_have_interval_property():
    rng = random.Random(4)
    for _ in range(30):
        _, h = random_gluable_pair(rng, 7)
        for t in h_tests(h, 2):
            assert set(t.pi) == set(h.vlabel)


# -- joint cuts ---------------------------------------------------------------


def test_unlabeled_edge_joint_cut_matches_cut_at():
    g = BoundariedHypergraph(Hypergraph("ab", ["ab"]))
    t = Test({}, S((0, set()), (0, set()), (0, set())), 1)
    f = {"a": Fraction(1, 2), "b": Fraction(3, 2)}
    for x in (Fraction(1, 4), 1, Fraction(7, 4)):
        assert joint_cut(g, f, t, x) == cut_at(g.hypergraph, f, x)


def test_labeled_edge_without_vertices_uses_test_positions():
    g = BoundariedHypergraph(Hypergraph([], [set()]), {}, {1: 0})
    rows = [(0, set())] * 2 + [(0, {1})] * 4 + [(0, set())]
    t = Test({}, S(*rows), 1)
    assert joint_cut(g, {}, t, Fraction(7, 2)) == {0}
    assert joint_cut(g, {}, t, Fraction(13, 2)) == frozenset()


def test_fig5a_against_fig6_test_at_one_half():
    g = load("fig3a.hg")
    t = make_h_test(load("fig3b.hg"), fmt.read_layout((DATA / "fig6.layout").read_text()), 2)
    f = {"v7": 1, "v8": 2, "v1": Fraction(1, 5), "v2": Fraction(2, 5), "v3": Fraction(3, 5),
         "v4": Fraction(4, 5), "v5": Fraction(23, 10), "v6": Fraction(26, 10)}
    # {v2,v3} (label 3) straddles 1/2 through v2 and v3; {v1..v4} through v2, v3;
    # {v5..v8} lies entirely right of 1/2.
    assert joint_cut(g, f, t, Fraction(1, 2)) == {0, 2}


# -- passing ------------------------------------------------------------------


def brute_force_passes(g, test):
    """Try every assignment of free vertices to gaps and every order inside gaps."""
    free = g.free_vertices()
    base = {v: test.pi[lab] for lab, v in g.vlabel.items()}
    for order in itertools.permutations(free):
        for gaps in itertools.product(range(test.n + 1), repeat=len(free)):
            if list(gaps) != sorted(gaps):
                continue
            f = dict(base)
            for gap in set(gaps):
                members = [v for v, q in zip(order, gaps) if q == gap]
                for j, v in enumerate(members, start=1):
                    f[v] = gap + Fraction(j, len(members) + 1)
            if joint_cutwidth(g, f, test) <= test.k:
                return True
    return False


def test_passes_matches_brute_force():
    rng = random.Random(5)
    yes = 0
    for _ in range(150):
        k = rng.randint(0, 2)
        test = random_test(rng, rng.randint(1, 3), k, rng.randint(0, 4))
        g = graph_for_test(rng, test, rng.randint(0, 3), rng.randint(0, 3))
        res = passes(g, test)
        assert bool(res) == brute_force_passes(g, test)
        if res:
            yes += 1
            assert joint_cutwidth(g, res.layout, test) <= k
    assert 10 < yes < 140


def test_passes_examples():
    t = Test({}, S((1, set()), (1, set())), 1)
    assert passes(empty_boundaried(), t)
    g = BoundariedHypergraph(Hypergraph(["p", "q"], [{"p", "q"}]), {1: "p", 2: "q"})
    spanning = Test({1: 1, 2: 3}, S((0, set()), (0, set()), (1, set()), (0, set())), 1)
    assert not passes(g, spanning)
    outside = Test({1: 1, 2: 3}, S((1, set()), (0, set()), (0, set()), (1, set())), 1)
    assert passes(g, outside)


def test_passes_needs_positions_for_vertex_labels():
    g = BoundariedHypergraph(Hypergraph(["p"], []), {1: "p"})
    with pytest.raises(ValueError):
        passes(g, Test({}, S((0, set())), 1))


# -- shrinking ----------------------------------------------------------------


def test_r1_on_increasing_pattern():
    t = Test({}, S((1, set()), (2, set()), (3, set())), 3)
    assert load_patterns(t) == [[0, 1, 2]]
    assert shrink(t).w == (1, 3)


def test_minimal_test_unchanged():
    t = Test({1: 2}, S((0, set()), (1, set()), (0, {2}), (1, {2})), 1)
    assert is_reduced(t) and shrink(t) == t


def test_r2_and_r3_replace_blocks():
    high = Test({}, S((0, set()), (2, set()), (1, set()), (2, set()), (0, set())), 2)
    assert shrink(high).w == (0, 2, 0)
    low = Test({}, S((2, set()), (0, set()), (1, set()), (0, set()), (2, set())), 2)
    assert shrink(low).w == (2, 0, 2)


def test_label_interval_end_is_pinned():
    t = Test({}, S((0, {1}), (1, {1}), (1, {1})), 1)
    g = BoundariedHypergraph(Hypergraph([], [set()]), {}, {1: 0})
    # deleting the middle entry would let g pass
    assert passes(g, Test({}, S((0, {1}), (1, {1})), 1))
    assert not passes(g, t) and not passes(g, shrink(t))


def test_shrink_remaps_positions():
    t = Test({1: 4}, S((0, set()), (1, set()), (2, set()), (2, set()), (0, set())), 2)
    r = shrink(t)
    assert r.pi[1] == r.n and r.w[r.pi[1]] == 0


def test_straits():
    t = Test({}, S((0, set()), (0, {1}), (0, {1}), (0, set())), 1)
    assert straits(t) == [(0, 0), (1, 2), (3, 3)]


def test_reduced_tests_enumeration_is_reduced_and_bounded():
    tests = reduced_tests([1], [2], 1, 4)
    assert tests and all(is_reduced(t) for t in tests)
    assert all(t.n <= size_bound(2, 1) for t in tests)
    assert size_bound(2, 1) == 48


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_shrink_properties(seed):
    rng = random.Random(seed)
    t, k = rng.randint(1, 4), rng.randint(0, 2)
    test = random_test(rng, t, k, rng.randint(0, 12))
    r = shrink(test)
    assert r.n <= test.n and r.n <= size_bound(t, k)
    assert all(len(p) <= 2 * k + 2 for p in load_patterns(r))
    assert shrink(r) == r
    assert set(r.pi) == set(test.pi) and r.edge_labels() == test.edge_labels()


# -- signatures and congruence -----------------------------------------------


def test_signature_basics():
    g = load("fig3a.hg")
    assert test_signature(g, []) == ()
    t = make_h_test(load("fig3b.hg"), fmt.read_layout((DATA / "fig6.layout").read_text()), 2)
    assert test_signature(g, [t]) == test_signature(load("fig3a.hg"), [t]) == (True,)


def test_congruence_of_equal_graphs():
    rng = random.Random(6)
    g, h = random_gluable_pair(rng)
    assert congruent_sample(g, g, 1, [h])


def test_distinguished_by_a_partner():
    g1 = BoundariedHypergraph(Hypergraph(["b"], []), {1: "b"})
    g2 = BoundariedHypergraph(Hypergraph(["b", "x"], [{"b", "x"}, {"b", "x"}]), {1: "b"})
    h = BoundariedHypergraph(Hypergraph(["c"], []), {1: "c"})
    res = congruent_sample(g1, g2, 1, [h])
    assert not res and res.partner is h
    assert in_cut(g1, h, 1) and not in_cut(g2, h, 1)
    test = distinguishing_test(g1, g2, h, 1)
    assert test is not None and passes(g1, test) and not passes(g2, test)


def test_non_gluable_partners_are_skipped_with_warning():
    g = BoundariedHypergraph(Hypergraph(["b"], []), {1: "b"})
    bad = BoundariedHypergraph(Hypergraph([], [set()]), {}, {1: 0})
    assert not gluing_is_compatible(g, bad)
    with pytest.warns(UserWarning):
        res = congruent_sample(g, g, 1, [bad])
    assert res and res.skipped == 1


def test_glued_cutwidth_matches_h_tests():
    rng = random.Random(8)
    for _ in range(40):
        g, h = random_gluable_pair(rng, 7)
        k = rng.randint(1, 2)
        glued = glue_hypergraphs(g, h).hypergraph
        assert decide_cutwidth(glued, k) == any(passes(g, t) for t in h_tests(h, k))
