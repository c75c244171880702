import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

import oracles
from dergraph.constructions import standard_family
from dergraph.errors import InvariantViolation, VertexCapExceeded
from dergraph.graph import (
    DerangementGraph,
    build_graph,
    complement_components,
    compute_H_G,
    derangement_set,
    has_triangle,
    is_bipartite,
    is_complete_multipartite_graph,
    join_decomposition,
    mask_of,
)
from dergraph.perms import Permutation, generate_group


def brute_adjacency(G):
    return oracles.adjacency([p.images for p in G.elements])


def graph_sets(graph):
    return [set(graph.neighbors(i)) for i in range(graph.num_vertices)]


@pytest.mark.parametrize(
    "kind, n, count",
    [("symmetric", 3, 2), ("cyclic-regular", 4, 3), ("symmetric", 4, 9)],
)
def test_derangement_counts(kind, n, count):
    G = standard_family(kind, n)
    flags, c = derangement_set(G)
    assert c == count
    assert c == sum(oracles.is_derangement(p.images) for p in G.elements)
    assert [oracles.is_derangement(p.images) for p in G.elements] == list(flags)


def test_sym4_derangement_cycle_types(sym4):
    flags, _ = derangement_set(sym4)
    types = sorted(tuple(sorted(len(c) for c in p.cycles())) for p, f in zip(sym4.elements, flags) if f)
    assert types.count((4,)) == 6 and types.count((2, 2)) == 3


def test_c3_is_k3():
    g = build_graph(standard_family("cyclic-regular", 3))
    assert graph_sets(g) == [{1, 2}, {0, 2}, {0, 1}]


def test_sym3_two_triangles(sym3):
    g = build_graph(sym3)
    adj = graph_sets(g)
    assert all(len(a) == 2 for a in adj)
    comps = {frozenset({v} | adj[v]) for v in range(6)}
    assert len(comps) == 2
    # each component is a coset of the 3-cycle subgroup
    a3 = frozenset(i for i, p in enumerate(sym3.elements) if p.is_even())
    assert a3 in comps


def test_construction_is_k444(c6, c6_graph):
    adj = graph_sets(c6_graph)
    assert all(len(a) == 8 for a in adj)
    comps = complement_components(c6_graph.rows)
    assert sorted(len(c) for c in comps) == [4, 4, 4]
    for c in comps:
        for v in c:
            assert adj[v] == set(range(12)) - set(c)


def test_adjacency_matches_definition(corpus):
    for e in corpus:
        if e.group.order > 150:
            continue
        assert graph_sets(build_graph(e.group)) == brute_adjacency(e.group), e.name


def test_vertex_cap():
    with pytest.raises(VertexCapExceeded):
        build_graph(standard_family("symmetric", 5), vertex_cap=100)


def test_matrix_roundtrip(sym4):
    g = build_graph(sym4)
    m = g.to_matrix()
    assert (m == m.T).all() and not m.diagonal().any()
    assert [mask_of(i for i in range(24) if row[i]) for row in m] == list(g.rows)


def test_compute_H_G(sym4, c6):
    assert len(compute_H_G(sym4)) == 24
    assert [p.images for p in compute_H_G(standard_family("cyclic-regular", 4))] == [(0, 1, 2, 3)]
    assert len(compute_H_G(c6)) == 4


def test_join_decomposition_examples(sym4, c6, c6_graph):
    C4 = standard_family("cyclic-regular", 4)
    assert join_decomposition(C4, build_graph(C4)).kind == "complete-graph"
    assert join_decomposition(sym4, build_graph(sym4)).kind == "not-a-join"
    d = join_decomposition(c6, c6_graph)
    assert d.kind == "nontrivial-join"
    assert d.index == 3 and d.h_g_order == 4
    assert [len(p) for p in d.parts] == [4, 4, 4]
    assert d.complete_multipartite
    assert sorted(v for p in d.parts for v in p) == list(range(12))


def test_triangles(sym3):
    assert has_triangle(build_graph(standard_family("cyclic-regular", 3))) == (0, 1, 2)
    g = build_graph(sym3)
    t = has_triangle(g)
    a3 = {i for i, p in enumerate(sym3.elements) if p.is_even()}
    assert set(t) == a3 or not set(t) & a3
    assert has_triangle(build_graph(standard_family("cyclic-regular", 2))) is None


def test_bipartite_c2_and_c3():
    r = is_bipartite(build_graph(standard_family("cyclic-regular", 2)))
    assert r.bipartite and r.coloring == (0, 1)
    r = is_bipartite(build_graph(standard_family("cyclic-regular", 3)))
    assert not r.bipartite
    assert sorted(r.odd_cycle) == [0, 1, 2]


def test_odd_cycle_certificate_is_a_cycle():
    # 5-cycle plus a pendant path, given as raw rows
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (4, 5)]
    rows = [0] * 6
    for a, b in edges:
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    r = is_bipartite(rows)
    cyc = r.odd_cycle
    assert len(cyc) % 2 == 1 and len(set(cyc)) == len(cyc)
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        assert rows[a] >> b & 1


def test_even_cycle_is_bipartite():
    rows = [0] * 6
    for a in range(6):
        b = (a + 1) % 6
        rows[a] |= 1 << b
        rows[b] |= 1 << a
    r = is_bipartite(rows)
    assert r.bipartite
    for a in range(6):
        assert r.coloring[a] != r.coloring[(a + 1) % 6]


def test_corpus_graph_invariants(corpus):
    for e in corpus:
        G = e.group
        g = build_graph(G)
        assert all(r.bit_count() == g.derangement_count for r in g.rows)
        assert not is_bipartite(g).bipartite
        assert has_triangle(g) is not None
        d = join_decomposition(G, g)
        comps = complement_components(g.rows)
        assert (1 < d.h_g_order < G.order) == (1 < len(comps) < G.order)
        assert len(comps) == d.index


def test_multipartite_direct_test_on_raw_rows():
    # K_{2,2,2}
    rows = [0] * 6
    for a in range(6):
        for b in range(6):
            if a // 2 != b // 2:
                rows[a] |= 1 << b
    assert is_complete_multipartite_graph(rows) == (True, 3)
    rows[0] &= ~(1 << 2)
    rows[2] &= ~1
    assert is_complete_multipartite_graph(rows)[0] is False


random_groups = st.integers(2, 6).flatmap(
    lambda n: st.lists(st.permutations(list(range(n))), min_size=1, max_size=3)
)


@settings(max_examples=50, deadline=None)
@given(random_groups)
def test_random_groups_graph_properties(gens):
    G = generate_group([Permutation(tuple(g)) for g in gens])
    assume(G.order <= 72)
    g = build_graph(G)
    assert graph_sets(g) == brute_adjacency(G)
    flags = g.derangement_flags
    els = [p.images for p in G.elements]
    index = {p: i for i, p in enumerate(els)}
    for i, p in enumerate(els):
        if flags[i]:
            assert flags[index[oracles.inv(p)]]
            for q in els:
                assert flags[index[oracles.mul(oracles.mul(oracles.inv(q), p), q)]]
    d = join_decomposition(G, g)
    h = set(d.h_g)
    assert h == set(oracles_closure_indices(els, flags))


def oracles_closure_indices(els, flags):
    fixers = [p for p, f in zip(els, flags) if not f]
    sub = oracles.closure(fixers)
    return [i for i, p in enumerate(els) if p in sub]


def test_corrupted_graph_trips_crosscheck(c6, c6_graph):
    rows = list(c6_graph.rows)
    # delete one cross-part edge
    a = 0
    b = next(iter(c6_graph.neighbors(0)))
    rows[a] &= ~(1 << b)
    rows[b] &= ~(1 << a)
    bad = DerangementGraph(c6, c6_graph.derangement_flags, tuple(rows), c6_graph.derangement_count)
    with pytest.raises(InvariantViolation):
        join_decomposition(c6, bad)
