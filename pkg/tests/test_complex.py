from __future__ import annotations

from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from systolic.complex import (
    Complex,
    build_complex,
    flag_complex_of_graph,
    is_flag,
    link,
    maximal_cliques,
    residue,
    simplex,
    span,
)
from systolic.errors import EmptyInput, MalformedSimplex, NotAFace, SelfLoop, UnknownVertex

OCTA = [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 1, 4], [5, 1, 2], [5, 2, 3], [5, 3, 4], [5, 1, 4]]


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return n, edges


def test_single_triangle():
    X = build_complex([[0, 1, 2]])
    assert len(X.facets) == 1 and len(X.edges) == 3 and X.vertex_count == 3


def test_octahedron_edges():
    assert len(build_complex(OCTA).edges) == 12


def test_hollow_triangle():
    X = build_complex([[0, 1], [1, 2], [0, 2]])
    assert X.facets == ((0, 1), (0, 2), (1, 2))
    assert X.dimension == 1


def test_non_maximal_faces_absorbed():
    X = build_complex([[0, 1, 2], [0, 1], [2]])
    assert X.facets == ((0, 1, 2),)


@pytest.mark.parametrize(
    "faces, exc",
    [([], EmptyInput), ([[0, 0, 1]], MalformedSimplex), ([[0, 2]], MalformedSimplex), ([[-1, 0]], MalformedSimplex)],
)
def test_build_errors(faces, exc):
    with pytest.raises(exc):
        build_complex(faces)


def test_flag_of_cycle_graph():
    X = flag_complex_of_graph(6, [(i, (i + 1) % 6) for i in range(6)])
    assert len(X.edges) == 6 and X.dimension == 1


def test_flag_of_k4():
    X = flag_complex_of_graph(4, list(combinations(range(4), 2)))
    assert X.facets == ((0, 1, 2, 3),)


def test_flag_of_octahedron_graph():
    g = nx.complete_multipartite_graph(2, 2, 2)
    X = flag_complex_of_graph(6, list(g.edges))
    assert len(X.facets) == 8 and X.dimension == 2


def test_self_loop_rejected():
    with pytest.raises(SelfLoop):
        flag_complex_of_graph(3, [(0, 0)])


def test_unknown_edge_endpoint():
    with pytest.raises(UnknownVertex):
        flag_complex_of_graph(2, [(0, 5)])


def test_links():
    T = build_complex([[0, 1, 2]])
    assert link(T, 0).complex.facets == ((0, 1),)
    L, vmap = link(build_complex(OCTA), 0)
    assert len(L.edges) == 4 and L.dimension == 1
    assert nx.is_isomorphic(L.graph(), nx.cycle_graph(4))
    assert vmap == (1, 2, 3, 4)


def test_link_torus_is_hexagon(torus44):
    for v in torus44.vertices:
        assert nx.is_isomorphic(link(torus44, v).complex.graph(), nx.cycle_graph(6))


def test_residue():
    T = build_complex([[0, 1, 2]])
    assert residue(T, [0]) == T
    X = build_complex(OCTA)
    assert residue(X, [0, 1]).facets == ((0, 1, 2), (0, 1, 4))
    with pytest.raises(NotAFace):
        residue(X, [0, 5])


def test_residue_star(euclid2):
    R = residue(euclid2, [0])
    assert len(R.facets) == 6 and all(0 in f for f in R.facets)


def test_is_flag():
    hollow = build_complex([[0, 1], [1, 2], [0, 2]])
    r = is_flag(hollow)
    assert not r.is_flag and r.witness == (0, 1, 2)
    assert is_flag(build_complex(OCTA)).is_flag


def test_is_flag_icosahedron(icosa):
    assert is_flag(icosa).is_flag


def test_span():
    T = build_complex([[0, 1, 2]])
    assert span(T, [0, 1]).facets == ((0, 1),)
    X = build_complex(OCTA)
    assert span(X, [0, 5]).facets == ((0,), (5,))
    assert span(X, [0, 1, 2]).facets == ((0, 1, 2),)
    with pytest.raises(UnknownVertex):
        span(X, [9])


def test_face_queries():
    X = build_complex(OCTA)
    assert X.is_face([2, 1]) and not X.is_face([0, 5])
    assert X.require_face([1, 0]) == (0, 1)
    with pytest.raises(NotAFace):
        X.require_face([0, 5])
    assert X.euler_characteristic() == 2
    assert X.f_vector() == [6, 12, 8]


def test_json_roundtrip():
    X = build_complex(OCTA)
    assert Complex.from_json(X.to_json()) == X
    sub = span(X, [1, 2, 5])
    assert Complex.from_dict(sub.to_dict()) == sub


def test_simplex_canonical():
    assert simplex([3, 1, 2]) == (1, 2, 3)
    with pytest.raises(MalformedSimplex):
        simplex([])


# -- properties against networkx as an independent oracle ------------------


@given(graphs())
def test_maximal_cliques_match_networkx(g):
    n, edges = g
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    expected = sorted(tuple(sorted(c)) for c in nx.find_cliques(G))
    assert sorted(maximal_cliques(n, edges)) == expected


@given(graphs())
def test_flag_complex_is_flag_and_euler_matches_cliques(g):
    n, edges = g
    X = flag_complex_of_graph(n, edges)
    assert is_flag(X).is_flag
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    chi = sum((-1) ** (len(c) - 1) for c in nx.enumerate_all_cliques(G))
    assert X.euler_characteristic() == chi


@given(graphs())
def test_links_of_flag_complexes_are_flag(g):
    n, edges = g
    X = flag_complex_of_graph(n, edges)
    for v in X.vertices:
        L = link(X, v).complex
        if not L.is_empty:
            assert is_flag(L).is_flag


@given(graphs(), st.data())
def test_span_is_full(g, data):
    n, edges = g
    X = flag_complex_of_graph(n, edges)
    S = data.draw(st.sets(st.sampled_from(X.vertices), min_size=1))
    Y = span(X, S)
    assert set(Y.vertices) == S
    # every face of X inside S is a face of Y, and nothing else
    for f in X.all_faces:
        assert Y.is_face(f) == (set(f) <= S)


@given(graphs())
def test_distances_match_networkx(g):
    n, edges = g
    X = flag_complex_of_graph(n, edges)
    D = X.distances
    lengths = dict(nx.all_pairs_shortest_path_length(X.graph()))
    for u in X.vertices:
        for v in X.vertices:
            assert D[u, v] == lengths[u].get(v, -1)
