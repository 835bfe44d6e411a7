"""Tests for graph types, constructions, invariants and generators."""

import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from sre_workbench.errors import ExplosionGuard, GenerationFailed
from sre_workbench.graphs import (
    BipartiteGraph, Graph, Hypergraph, SupportInstance, chromatic_number,
    complete_bipartite, cycle_graph, double_cover, format_graph,
    gen_biregular, gen_regular_girth, girth, incidence_graph,
    independence_number, make_bipartite, make_graph, make_hypergraph,
    parse_graph_file,
)

INF = math.inf


def test_triangle_incidence_is_c6():
    h = make_hypergraph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    g = incidence_graph(h)
    assert girth(g) == 6
    assert set(g.white_degrees().values()) == {2}
    assert set(g.black_degrees().values()) == {2}


def test_single_rank3_hyperedge_is_star():
    h = make_hypergraph([1, 2, 3], [(1, 2, 3)])
    g = incidence_graph(h)
    assert len(g.black_nodes) == 1
    assert sorted(g.white_degrees().values()) == [1, 1, 1]
    assert girth(g) == INF


def test_incidence_degrees_round_trip():
    h = make_hypergraph(range(1, 7), [(1, 2, 3), (3, 4), (4, 5, 6), (1, 6)])
    g = incidence_graph(h)
    assert g.white_degrees() == h.node_degrees()
    assert {b: d for b, d in g.black_degrees().items()} == \
        {i + 1: len(e) for i, e in enumerate(h.hyperedges)}


def test_hypergraph_linearity():
    assert make_hypergraph([1, 2, 3], [(1, 2), (2, 3)]).is_linear()
    assert not make_hypergraph([1, 2, 3], [(1, 2, 3), (1, 2)]).is_linear()


def test_double_cover_c5_is_c10():
    dc = double_cover(cycle_graph(5))
    g = dc.as_graph()
    assert len(g.nodes) == 10
    assert set(g.degrees().values()) == {2}
    assert girth(g) == 10  # connected 2-regular on 10 nodes is C_10


def test_double_cover_single_edge():
    dc = double_cover(make_graph([1, 2], [(1, 2)]))
    assert sorted(dc.edges) == [(1, 2), (2, 1)]
    assert girth(dc) == INF


def test_double_cover_regular_random():
    g = gen_regular_girth(10, 3, 3, seed=7)
    dc = double_cover(g)
    assert dc.is_biregular(3, 3)
    assert girth(dc) >= girth(g)


def test_girth_examples():
    assert girth(cycle_graph(6)) == 6
    assert girth(make_graph([1, 2, 3, 4], [(1, 2), (2, 3), (2, 4)])) == INF
    assert girth(complete_bipartite(3, 3)) == 4
    h = make_hypergraph([1, 2, 3], [(1, 2), (2, 3), (1, 3)])
    assert girth(h) == 3


def naive_girth(g: Graph):
    adj = g.adjacency()
    best = INF
    nodes = list(g.nodes)
    for k in range(3, len(nodes) + 1):
        for perm in itertools.permutations(nodes, k):
            if perm[0] != min(perm):
                continue
            if all(perm[i + 1] in adj[perm[i]] for i in range(k - 1)) and \
                    perm[0] in adj[perm[-1]]:
                best = min(best, k)
        if best < INF:
            return best
    return best


@given(st.integers(0, 2 ** 28 - 1))
@settings(max_examples=25, deadline=None)
def test_girth_matches_naive(bits):
    nodes = list(range(1, 9))
    pairs = list(itertools.combinations(nodes, 2))
    edges = [e for i, e in enumerate(pairs) if bits >> i & 1]
    g = make_graph(nodes, edges)
    assert girth(g) == naive_girth(g)


def test_independence_examples():
    assert independence_number(cycle_graph(5)) == 2
    assert independence_number(complete_bipartite(3, 3)) == 3
    assert independence_number(make_graph(range(1, 8), [])) == 7


def test_chromatic_examples():
    assert chromatic_number(cycle_graph(7)) == 3
    assert chromatic_number(complete_bipartite(3, 4)) == 2
    k4 = make_graph(range(1, 5), itertools.combinations(range(1, 5), 2))
    assert chromatic_number(k4) == 4


@given(st.integers(0, 2 ** 21 - 1))
@settings(max_examples=30, deadline=None)
def test_chi_alpha_bound(bits):
    nodes = list(range(1, 8))
    pairs = list(itertools.combinations(nodes, 2))
    g = make_graph(nodes, [e for i, e in enumerate(pairs) if bits >> i & 1])
    chi = chromatic_number(g)
    alpha = independence_number(g)
    assert chi * alpha >= len(nodes)


def test_invariant_guard():
    big = make_graph(range(1, 60), [])
    with pytest.raises(ExplosionGuard):
        independence_number(big)
    with pytest.raises(ExplosionGuard):
        chromatic_number(big)


def test_gen_biregular_forced_cases():
    assert gen_biregular(3, 3, 3, 3, seed=0).is_biregular(3, 3)
    g = gen_biregular(4, 2, 1, 2, seed=1)
    assert sorted(g.white_degrees().values()) == [1, 1, 1, 1]
    assert sorted(g.black_degrees().values()) == [2, 2]
    k88 = gen_biregular(8, 8, 8, 8, seed=5)
    assert len(k88.edges) == 64  # forced: K_{8,8}


def test_gen_biregular_rejects_mismatch():
    with pytest.raises(ValueError):
        gen_biregular(3, 3, 2, 3, seed=0)


def test_generators_reproducible():
    a = gen_biregular(6, 4, 2, 3, seed=42)
    b = gen_biregular(6, 4, 2, 3, seed=42)
    assert a == b
    c = gen_regular_girth(10, 3, 4, seed=9)
    d = gen_regular_girth(10, 3, 4, seed=9)
    assert c == d and c.certificate == d.certificate


def test_gen_regular_girth():
    g = gen_regular_girth(10, 3, 5, seed=3)
    assert set(g.degrees().values()) == {3}
    assert girth(g) >= 5
    assert g.certificate["girth"] >= 5
    assert "independence_number" in g.certificate


def test_gen_regular_girth_impossible():
    # K_4 is the only cubic graph on 4 nodes and has girth 3
    with pytest.raises(GenerationFailed):
        gen_regular_girth(4, 3, 5, seed=0, max_tries=50)


def test_graph_file_round_trip_bipartite():
    g = gen_biregular(4, 4, 2, 2, seed=11)
    text = format_graph(g)
    assert parse_graph_file(text) == g


def test_graph_file_round_trip_graph_and_hypergraph():
    g = cycle_graph(5)
    assert parse_graph_file(format_graph(g)) == g
    h = make_hypergraph([1, 2, 3, 4], [(1, 2, 3), (3, 4)])
    assert parse_graph_file(format_graph(h)) == h


def test_graph_file_canonicalizes_ids():
    text = "graph\nnodes: 10 20 30\nedges:\n10 20\n20 30\n"
    g = parse_graph_file(text)
    assert g.nodes == (1, 2, 3)
    assert frozenset((1, 2)) in g.edges


def test_graph_file_nodes_count_shorthand():
    g = parse_graph_file("graph\nnodes: 4\nedges:\n1 2\n3 4\n")
    assert g.nodes == (1, 2, 3, 4)


def test_support_instance_file():
    text = ("bipartite\nwhite: 1 2\nblack: 1 2\nedges:\n1 1\n1 2\n2 1\n2 2\n"
            "input:\n1 4\nS:\n1\n")
    inst = parse_graph_file(text)
    assert isinstance(inst, SupportInstance)
    assert inst.input_edges == ((1, 1), (2, 2))
    assert inst.S == (1,)
    assert inst.input_white_degree() == 1
    back = parse_graph_file(format_graph(inst))
    assert back.input_edges == inst.input_edges and back.S == inst.S


def test_support_instance_validation():
    g = complete_bipartite(2, 2)
    with pytest.raises(ValueError):
        SupportInstance(g, ((3, 1),))
