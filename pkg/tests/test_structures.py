import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posmc import catalog
from posmc.logic import Signature
from posmc.structures import (
    Digraph,
    Structure,
    StructureError,
    all_digraphs,
    canonical_code,
    complement,
    components,
    contract_twin,
    converse,
    disjoint_union,
    doub,
    edge_code,
    find_isomorphism,
    find_twins,
    from_code,
    induced,
    is_connected,
    is_isomorphic,
    isolated_vertices,
    parse_structure,
    relabel,
    render_structure,
    symclos,
    tranclos,
)


@st.composite
def digraphs(draw, max_size=4):
    n = draw(st.integers(1, max_size))
    pairs = [(x, y) for x in range(n) for y in range(n)]
    return Digraph.from_edges(n, draw(st.sets(st.sampled_from(pairs))))


def test_render_parse_example():
    text = "universe 3\nrel E 2\n0 1\n1 1\n1 2\nend\n"
    h = parse_structure(text)
    assert isinstance(h, Digraph)
    assert h.edges == {(0, 1), (1, 1), (1, 2)}
    assert render_structure(h) == text


def test_parse_multi_relation_with_comments():
    s = parse_structure("universe 2 # boolean\nrel R 3\n0 0 1\nend\nrel U 1\n1\nend\n")
    assert s.sig == Signature((("R", 3), ("U", 1)))
    assert s.table("R") == {(0, 0, 1)}
    assert parse_structure(render_structure(s)) == s


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("rel E 2\nend", "universe"),
        ("universe 2\nrel E 2\n0 2\nend", "out of range"),
        ("universe 2\nrel E 2\n0 1 1\nend", "arity mismatch"),
        ("universe 2\nrel E 2\n0 1", "missing its 'end'"),
        ("universe 2\nrel E 2\nend\nrel E 2\nend", "duplicate"),
        ("universe 2\nrel E 2\na b\nend", "integers"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(StructureError, match=fragment):
        parse_structure(text)


@given(digraphs())
@settings(max_examples=100)
def test_render_round_trip(h):
    assert parse_structure(render_structure(h)) == h


def test_structure_build():
    s = Structure.build(2, R=[(0, 1)], U=[(1,)])
    assert s.sig.arity("R") == 2 and s.table("U") == {(1,)}


def test_complement_of_directed_path_with_middle_loop():
    h = catalog.digraph("DP010_3")
    assert complement(h).edges == {(0, 0), (0, 2), (1, 0), (2, 0), (2, 1), (2, 2)}


@given(digraphs())
@settings(max_examples=100)
def test_complement_involution(h):
    assert complement(complement(h)) == h
    assert len(complement(h).edges) + len(h.edges) == h.size**2


def test_closures():
    p = catalog.digraph("DP000_3")
    assert symclos(p) == catalog.digraph("P000_3")
    assert tranclos(p).edges == {(0, 1), (1, 2), (0, 2)}
    # doub keeps only double edges; loops count as double
    assert doub(p).edges == set()
    assert doub(catalog.digraph("P010_3")) == catalog.digraph("P010_3")
    x = Digraph.from_edges(3, [(0, 0), (1, 1), (0, 1), (1, 2), (2, 1)])
    assert is_isomorphic(doub(tranclos(x)), catalog.digraph("K1_1+K11_2"))
    cycle = Digraph.from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert tranclos(cycle) == catalog.digraph("K111_3")


@given(digraphs())
@settings(max_examples=100)
def test_tranclos_idempotent_and_brute_force(h):
    t = tranclos(h)
    assert tranclos(t) == t
    n = h.size
    reach = {(x, y) for x in range(n) for y in range(n) for k in range(1, n + 1)
             if any(all((w[i], w[i + 1]) in h.edges for i in range(k)) for w in itertools.product(range(n), repeat=k + 1) if w[0] == x and w[-1] == y)}
    assert t.edges == reach


def test_components_and_isolation():
    h = catalog.digraph("K1+K2")
    assert isolated_vertices(h) == [0]
    assert sorted(map(sorted, components(h))) == [[0], [1, 2]]
    assert not is_connected(h)
    assert is_connected(catalog.digraph("DP000_3"))
    # a loop does not break isolation of the other vertices but the looped vertex is not isolated
    assert isolated_vertices(catalog.digraph("K1_1+K11_2")) == []


def test_induced_relabel_union_converse():
    h = catalog.digraph("DP010_3")
    assert induced(h, [1, 2]).edges == {(0, 0), (0, 1)}
    assert relabel(h, (2, 1, 0)).edges == {(2, 1), (1, 0), (1, 1)}
    assert converse(h).edges == {(1, 0), (2, 1), (1, 1)}
    u = disjoint_union(catalog.digraph("K1"), catalog.digraph("K2"))
    assert u == catalog.digraph("K1+K2")


def test_isomorphism():
    h = catalog.digraph("DP010_3")
    g = relabel(h, (2, 0, 1))
    perm = find_isomorphism(h, g)
    assert perm is not None and relabel(h, perm) == g
    assert not is_isomorphic(h, catalog.digraph("DP100_3"))
    assert not is_isomorphic(catalog.digraph("K2"), catalog.digraph("K3"))


def test_edge_codes():
    h = catalog.digraph("DP010_3")
    assert edge_code(h) == "010011000"
    assert from_code(3, "010011000") == h
    with pytest.raises(ValueError):
        from_code(2, "010")


def _orbit_count(n):
    # independent count: union-find over all relabellings, no canonical codes
    codes = {edge_code(h): i for i, h in enumerate(all_digraphs(n))}
    parent = list(range(len(codes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for h in all_digraphs(n):
        i = codes[edge_code(h)]
        for perm in itertools.permutations(range(n)):
            j = codes["".join("1" if (a, b) in {(perm[x], perm[y]) for x, y in h.edges} else "0" for a in range(n) for b in range(n))]
            parent[find(i)] = find(j)
    return len({find(i) for i in range(len(codes))})


@pytest.mark.parametrize("n, expected", [(1, 2), (2, 10), (3, 104)])
def test_isomorphism_class_counts(n, expected):
    # 2, 10, 104: number of digraphs with loops allowed up to isomorphism
    assert len({canonical_code(h) for h in all_digraphs(n)}) == expected
    assert _orbit_count(n) == expected


def test_twins():
    assert find_twins(catalog.digraph("P000_3")) == [(0, 2)]
    assert contract_twin(catalog.digraph("P000_3"), 0, 2) == catalog.digraph("K2")
    assert find_twins(catalog.digraph("K1_1+K11_2")) == [(1, 2)]
    assert contract_twin(catalog.digraph("K1_1+K11_2"), 1, 2) == catalog.digraph("K2bar")
    assert find_twins(catalog.digraph("K3")) == []
    with pytest.raises(StructureError):
        contract_twin(catalog.digraph("K3"), 0, 1)


@given(digraphs())
@settings(max_examples=100)
def test_twin_pairs_swap_invariant(h):
    for x, y in find_twins(h):
        perm = list(range(h.size))
        perm[x], perm[y] = y, x
        assert relabel(h, tuple(perm)) == h
