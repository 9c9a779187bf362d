import pytest
from hypothesis import given

from dibipart.digraph import (
    Digraph,
    complete_digraph,
    directed_cycle,
    directed_path,
    format_digraph,
    parse_digraph,
)
from dibipart.errors import ParseError

from conftest import digraphs

CYCLE3 = Digraph(3, [(0, 1), (1, 2), (2, 0)])


def test_out_neighbors_examples():
    assert CYCLE3.out_neighbors(0) == {1}
    assert complete_digraph(3).out_neighbors(2) == {0, 1}
    assert Digraph(4).out_neighbors(3) == set()
    with pytest.raises(IndexError):
        CYCLE3.out_neighbors(3)


def test_degree_profile_examples():
    assert tuple(Digraph(2, [(0, 1), (1, 0)]).degree_profile(0)) == (1, 1, 0, 0, 1)
    assert tuple(CYCLE3.degree_profile(0)) == (1, 1, 1, 1, 2)
    assert tuple(complete_digraph(4).degree_profile(2)) == (3, 3, 0, 0, 3)


def test_min_union_degree_examples():
    assert complete_digraph(5).min_union_degree() == 4
    assert directed_path(3).min_union_degree() == 1
    assert Digraph(3, [(0, 1), (0, 2), (1, 2)]).min_union_degree() == 2


def test_induced_examples():
    k2 = complete_digraph(4).induced({0, 1})
    assert k2.n == 2 and k2.arc_count == 2
    sub = CYCLE3.induced({0, 1})
    assert set(sub.arcs()) == {(0, 1)}
    assert CYCLE3.induced(set()).n == 0
    relabeled = CYCLE3.induced({1, 2})
    assert relabeled.labels == (1, 2)
    with pytest.raises((ValueError, IndexError)):
        CYCLE3.induced({5})


def test_bipartite_examples():
    d = Digraph(3, [(0, 1), (0, 2), (2, 1)])
    b = d.bipartite_subgraph({0, 1}, {2})
    lab = b.labels
    assert {(lab[u], lab[v]) for u, v in b.arcs()} == {(0, 2), (2, 1)}
    assert complete_digraph(4).bipartite_subgraph({0, 1}, {2, 3}).arc_count == 8
    assert CYCLE3.bipartite_subgraph({0, 1, 2}, set()).arc_count == 0
    with pytest.raises(ValueError):
        CYCLE3.bipartite_subgraph({0, 1}, {1, 2})


def test_reverse_examples():
    assert set(CYCLE3.reverse().arcs()) == {(1, 0), (2, 1), (0, 2)}
    assert set(complete_digraph(3).reverse().arcs()) == set(complete_digraph(3).arcs())


@given(digraphs(max_n=8))
def test_reverse_involution_and_degree_swap(d):
    r = d.reverse()
    assert set(r.reverse().arcs()) == set(d.arcs())
    for v in range(d.n):
        p, q = d.degree_profile(v), r.degree_profile(v)
        assert (p[0], p[1], p[2], p[3], p[4]) == (q[1], q[0], q[3], q[2], q[4])


@given(digraphs(max_n=8))
def test_degree_identities(d):
    for v in range(d.n):
        out, inn, sole_out, sole_in, union = d.degree_profile(v)
        digons = len(d.out_neighbors(v) & d.in_neighbors(v))
        assert sole_out <= out and sole_in <= inn
        assert union == out + inn - digons


@given(digraphs(max_n=8))
def test_subgraphs_add_no_arcs(d):
    half = set(range(0, d.n, 2))
    rest = set(range(d.n)) - half
    for g in (d.induced(half), d.bipartite_subgraph(half, rest)):
        lab = g.labels
        for u, v in g.arcs():
            assert d.has_arc(lab[u], lab[v])


@given(digraphs(max_n=8))
def test_text_round_trip(d):
    if d.n == 0:
        return
    back = parse_digraph(format_digraph(d, comment="x"))
    assert back.n == d.n and set(back.arcs()) == set(d.arcs())
    assert back.graph_hash() == d.graph_hash()


def test_tournament_property():
    t = Digraph(3, [(0, 1), (1, 2), (2, 0)])
    assert t.is_tournament() and t.min_union_degree() == 2
    assert not complete_digraph(3).is_tournament()
    assert not directed_cycle(4).is_tournament()


def test_construction_rejects_bad_arcs():
    with pytest.raises(ValueError):
        Digraph(2, [(0, 0)])
    with pytest.raises(ValueError):
        Digraph(2, [(0, 1), (0, 1)])


@pytest.mark.parametrize(
    "text, line",
    [
        ("2 1\n0 0\n", 2),
        ("2 2\n0 1\n0 1\n", 3),
        ("0 0\n", 1),
        ("2 1\n0 5\n", 2),
        ("3 2\n0 1\n", None),
        ("x y\n", 1),
    ],
)
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_digraph(text)
    if line is not None:
        assert info.value.line == line


def test_parse_comments():
    d = parse_digraph("# hello\n3 2\n# mid\n0 1\n1 2\n")
    assert set(d.arcs()) == {(0, 1), (1, 2)}


def test_hash_order_independent():
    a = Digraph(3, [(0, 1), (1, 2)])
    b = Digraph(3, [(1, 2), (0, 1)])
    assert a.graph_hash() == b.graph_hash()
    assert a.graph_hash() != Digraph(3, [(0, 1)]).graph_hash()
