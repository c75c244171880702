import json

import pytest

import oracles
from dergraph.constructions import (
    FAMILIES,
    builtin_corpus,
    group_from_dict,
    load_corpus,
    multipartite_construction,
    multipartite_generators,
    read_group_file,
    standard_family,
    write_corpus,
    write_group_file,
)
from dergraph.errors import GroupError, OrderCapExceeded, PermutationParseError
from dergraph.graph import build_graph, h_g_indices, join_decomposition
from dergraph.perms import block_system, is_primitive, is_transitive, orbits_of


@pytest.mark.parametrize("n", [6, 10, 14])
def test_construction_structure(n):
    G = multipartite_construction(n)
    assert G.degree == n
    assert G.order == (n // 2) * 2 ** (n // 2 - 1)
    assert all(p.is_even() for p in G.elements)
    assert is_transitive(G) and not is_primitive(G)
    pairs = [frozenset({2 * i, 2 * i + 1}) for i in range(n // 2)]
    assert {frozenset(b) for b in block_system(G, {0, 1}).blocks} == set(pairs)
    h = h_g_indices(G)
    hs = [G.elements[i] for i in h]
    assert not any(oracles.is_derangement(p.images) for p in hs)
    assert {frozenset(o) for o in orbits_of(hs, n)} == set(pairs)
    assert G.order // len(h) == n // 2
    d = join_decomposition(G, build_graph(G))
    assert d.complete_multipartite and d.index == n // 2


def test_construction_h_g_is_derangement_free():
    for n in (6, 10, 14):
        G = multipartite_construction(n)
        hs = [G.elements[i].images for i in h_g_indices(G)]
        assert len(hs) == 2 ** (n // 2 - 1)
        assert not any(oracles.is_derangement(p) for p in hs)


def test_construction_matches_brute_force_even_filter():
    els = oracles.closure(
        [oracles.cycles_to_tuple([(0, 1)], 6), oracles.cycles_to_tuple([(2, 3)], 6),
         oracles.cycles_to_tuple([(4, 5)], 6), oracles.cycles_to_tuple([(0, 2, 4), (1, 3, 5)], 6)]
    )
    assert len(els) == 24

    def even(p):
        seen, parity = set(), 0
        for s in range(len(p)):
            k, x = 0, s
            while x not in seen:
                seen.add(x)
                x = p[x]
                k += 1
            parity += max(k - 1, 0)
        return parity % 2 == 0

    assert {p.images for p in multipartite_construction(6).elements} == {p for p in els if even(p)}


def test_construction_generators():
    gens = multipartite_generators(6)
    assert len(gens) == 4 and all(g.is_even() for g in gens)


@pytest.mark.parametrize("n", [8, 4, 7, 2, 22])
def test_construction_rejects_bad_degree(n):
    with pytest.raises(GroupError):
        multipartite_construction(n)


@pytest.mark.parametrize(
    "kind, n, order",
    [("symmetric", 4, 24), ("alternating", 4, 12), ("dihedral", 5, 10), ("cyclic-regular", 7, 7), ("symmetric", 1, 1)],
)
def test_standard_families(kind, n, order):
    G = standard_family(kind, n)
    assert G.order == order and G.degree == n
    assert is_transitive(G)
    assert G.name == f"{kind}-{n}"


def test_standard_family_errors():
    with pytest.raises(GroupError):
        standard_family("mathieu", 11)
    with pytest.raises(GroupError):
        standard_family("alternating", 2)
    with pytest.raises(OrderCapExceeded):
        standard_family("symmetric", 8, max_order=1000)
    assert "paper-multipartite" in FAMILIES


def test_builtin_corpus():
    entries = builtin_corpus()
    assert len(entries) >= 25
    names = [e.name for e in entries]
    assert len(set(names)) == len(names)
    for e in entries:
        assert e.group.degree >= 3 and is_transitive(e.group)
        assert e.expected["order"] == e.group.order


def test_roundtrip_every_corpus_group(tmp_path, corpus):
    paths = write_corpus(corpus, tmp_path)
    assert len(paths) == len(corpus)
    back = {e.name: e.group for e in load_corpus(tmp_path)}
    for e in corpus:
        assert back[e.name].elements == e.group.elements, e.name


def test_load_corpus_empty(tmp_path):
    assert load_corpus(tmp_path) == []


def test_load_corpus_per_file_errors(tmp_path):
    write_group_file(standard_family("symmetric", 3), tmp_path / "a_good.json")
    (tmp_path / "b_degree.json").write_text(json.dumps({"name": "x", "degree": 3, "generators": ["(1,4)"]}))
    (tmp_path / "c_json.json").write_text("{not json")
    (tmp_path / "d_order.json").write_text(
        json.dumps({"name": "y", "degree": 3, "generators": ["(1,2,3)"], "order": 6})
    )
    write_group_file(standard_family("cyclic-regular", 4), tmp_path / "e_good.json")
    entries = load_corpus(tmp_path)
    assert [e.group is not None for e in entries] == [True, False, False, False, True]
    for e in entries[1:4]:
        assert e.error.startswith(e.source.split("/")[-1])


def test_group_from_dict_validation():
    ok = {"name": "c3", "degree": 3, "generators": ["(1,2,3)"], "order": 3}
    assert group_from_dict(ok).order == 3
    for bad in (
        [],
        {"name": "x", "degree": 3},
        {"name": 1, "degree": 3, "generators": []},
        {"name": "x", "degree": "3", "generators": []},
        {"name": "x", "degree": 0, "generators": []},
        {"name": "x", "degree": 3, "generators": "(1,2)"},
    ):
        with pytest.raises(GroupError):
            group_from_dict(bad)
    with pytest.raises(PermutationParseError):
        group_from_dict({"name": "x", "degree": 3, "generators": ["(1,2"]})


def test_empty_generator_list_gives_trivial_group():
    G = group_from_dict({"name": "t", "degree": 2, "generators": []})
    assert G.order == 1


def test_read_group_file_bad_json(tmp_path):
    f = tmp_path / "x.json"
    f.write_text("[1,")
    with pytest.raises(GroupError):
        read_group_file(f)
