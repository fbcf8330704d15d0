import itertools
from collections import Counter

import numpy as np
import pytest

from toricstrata.io import corpus
from toricstrata.polytope import facets_from_vertices, h_vector, is_simple
from toricstrata.retraction import (
    InvalidHint,
    NotAlmostSimple,
    NotGeneric,
    NotSimple,
    PolytopalComplex,
    betti_numbers,
    delete_vertex,
    enumerate_retractions,
    find_retraction,
    free_vertices,
    height_retraction,
    is_almost_simple,
    iter_retractions,
    star,
)

from conftest import ALMOST_SIMPLE, GZ_WORKED_ORDER


def oracle_faces(P):
    """Vertex sets of all nonempty faces, as intersections of facet vertex sets."""
    facet_sets = [frozenset(v for v in range(P.num_vertices) if P.incidence[v][i]) for i in range(len(P.facets))]
    faces = {frozenset(range(P.num_vertices))}
    frontier = set(faces)
    while frontier:
        new = set()
        for f in frontier:
            for g in facet_sets:
                h = f & g
                if h and h not in faces:
                    new.add(h)
        faces |= new
        frontier = new
    return faces


def affine_dim(P, vs):
    pts = np.array([[float(x) for x in P.vertices[v]] for v in vs])
    return int(np.linalg.matrix_rank(pts[1:] - pts[0])) if len(pts) > 1 else 0


def oracle_free(P, faces, v):
    """k if v is free in the complex given by ``faces``, else None."""
    st = [f for f in faces if v in f]
    top = [f for f in st if not any(f < g for g in st)]
    if len(top) != 1:
        return None
    E = top[0]
    k = affine_dim(P, E)
    edges = [f for f in faces if len(f) == 2 and v in f and f <= E and affine_dim(P, f) == 1]
    return k if k >= 1 and len(edges) == k else None


def oracle_orders(P):
    """Every vertex order that is a valid retraction, by trying all permutations."""
    faces = oracle_faces(P)
    good = set()
    for perm in itertools.permutations(range(P.num_vertices)):
        live = set(faces)
        for stage, v in enumerate(perm):
            if stage < len(perm) - 1 and oracle_free(P, live, v) is None:
                break
            live = {f for f in live if v not in f}
        else:
            good.add(perm)
    return good


def test_star_sizes(gz, cube):
    C = PolytopalComplex.full(cube)
    # vertex, 3 edges, 3 squares, the cube
    assert len(star(C, 0)) == 8
    G = PolytopalComplex.full(gz)
    # vertex, 4 edges, 4 facets, the polytope
    assert len(star(G, gz.vertex_index((1, 1, 1)))) == 10


def test_free_vertices_start(gz, cube, octahedron):
    assert [v for v, _, k in free_vertices(PolytopalComplex.full(cube))] == list(range(8))
    assert {k for _, _, k in free_vertices(PolytopalComplex.full(cube))} == {3}
    gfree = [v for v, _, _ in free_vertices(PolytopalComplex.full(gz))]
    assert gz.vertex_index((1, 1, 1)) not in gfree
    assert len(gfree) == 6
    assert free_vertices(PolytopalComplex.full(octahedron)) == []


@pytest.mark.parametrize("name", ALMOST_SIMPLE + ["octahedron"])
def test_free_vertices_match_oracle_along_a_walk(name):
    P = corpus(name)
    L = P.face_lattice
    C = PolytopalComplex.full(P)
    faces = oracle_faces(P)
    assert faces == {f.vertex_set for f in L.faces}
    while C.faces:
        live = {L.faces[i].vertex_set for i in C.faces}
        ours = {v: k for v, _, k in free_vertices(C)}
        expect = {v: oracle_free(P, live, v) for v in C.vertices}
        expect = {v: k for v, k in expect.items() if k is not None}
        assert ours == expect
        if not ours:
            break
        v = max(ours)
        C = delete_vertex(C, v)


def test_delete_vertex_gz(gz):
    C = delete_vertex(PolytopalComplex.full(gz), gz.vertex_index((0, 2, 2)))
    L = gz.face_lattice
    dims = Counter(L.faces[i].dim for i in C.faces)
    assert dims[0] == 6
    assert dims[1] == 8
    assert dims[3] == 0
    squares = {frozenset(L.faces[i].vertex_set) for i in C.faces if L.faces[i].dim == 2}
    on = lambda pred: frozenset(v for v, p in enumerate(gz.vertices) if pred(p))
    assert squares == {on(lambda p: p[0] == 1), on(lambda p: p[1] == 1), on(lambda p: p[2] == p[0])}


def test_worked_gz_order(gz):
    seq = find_retraction(gz, GZ_WORKED_ORDER)
    assert seq.k_sequence == (3, 2, 2, 2, 1, 1, 0)
    assert betti_numbers(seq).b == (1, 2, 3, 1)
    assert str(betti_numbers(seq)) == "b0=1 b2=2 b4=3 b6=1"


def test_default_search_is_deterministic(gz):
    a = find_retraction(gz)
    b = find_retraction(corpus("gz3"))
    assert a.order == b.order
    assert a.steps[-1].k == 0


def test_invalid_hints(gz):
    with pytest.raises(InvalidHint):
        find_retraction(gz, [6, 0, 1, 2, 3, 4, 5])  # (1,1,1) is not free first
    with pytest.raises(InvalidHint):
        find_retraction(gz, [0, 1, 2])
    with pytest.raises(InvalidHint):
        find_retraction(gz, [0, 0, 1, 2, 3, 4, 5])


def test_segment():
    P = corpus("segment")
    seq = find_retraction(P)
    assert seq.k_sequence == (1, 0)
    assert betti_numbers(seq).b == (1, 1)


def test_enumerate(gz, octahedron):
    seqs = enumerate_retractions(gz, 5)
    assert len(seqs) >= 2
    assert len({s.order for s in seqs}) == len(seqs)
    assert enumerate_retractions(octahedron, 3) == []
    with pytest.raises(ValueError):
        enumerate_retractions(gz, 0)


def test_octahedron_not_almost_simple(octahedron):
    with pytest.raises(NotAlmostSimple) as info:
        find_retraction(octahedron)
    assert info.value.explored == 1
    assert not is_almost_simple(octahedron)


@pytest.mark.parametrize("name", ALMOST_SIMPLE)
def test_all_sequences_valid_and_betti_invariant(name):
    P = corpus(name)
    seqs = list(iter_retractions(P))
    assert seqs
    if P.num_vertices <= 7:
        assert {s.order for s in seqs} == oracle_orders(P)
    bettis = {betti_numbers(s).b for s in seqs}
    assert len(bettis) == 1
    (b,) = bettis
    assert sum(b) == P.num_vertices
    for s in seqs:
        assert find_retraction(P, s.order).k_sequence == s.k_sequence
        assert s.k_sequence[0] == P.ambient_dim
        assert s.k_sequence[-1] == 0
        assert sum(s.k_sequence) == len(P.face_lattice.edges)
    if is_simple(P):
        assert b == h_vector(P)


def test_pyramid_apex_never_first():
    P = corpus("pyramid")
    apex = P.vertex_index((0, 0, 1))
    seqs = list(iter_retractions(P))
    assert {s.order for s in seqs} == oracle_orders(P)
    assert all(s.order[0] != apex for s in seqs)
    assert {s.k_sequence for s in seqs} == {(3, 2, 2, 1, 0)}
    assert betti_numbers(seqs[0]).b == (1, 1, 2, 1)


@pytest.mark.parametrize("phi", [(1, 2, 4), (4, 2, 1), (-1, 3, 7), (5, -2, 1)])
def test_height_retraction_cube(cube, phi):
    seq = height_retraction(cube, phi)
    # k is the number of edges going down from the vertex
    for s in seq.steps:
        p = np.array([float(x) for x in cube.vertices[s.vertex]])
        down = 0
        for fi, v, w in cube.face_lattice.edges:
            if s.vertex in (v, w):
                q = np.array([float(x) for x in cube.vertices[w if v == s.vertex else v]])
                down += np.dot(phi, q) < np.dot(phi, p)
        assert s.k == down
    assert betti_numbers(seq).b == (1, 3, 3, 1)


def test_height_retraction_errors(cube, square, gz):
    assert height_retraction(square, (1, 3)).k_sequence == (2, 1, 1, 0)
    with pytest.raises(NotGeneric):
        height_retraction(cube, (1, 1, 0))
    with pytest.raises(NotSimple):
        height_retraction(gz, (1, 2, 4))


def test_prism_oracle():
    # triangular prism: simple, h = (1, 2, 2, 1)
    P = facets_from_vertices([(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (0, 1, 1)])
    assert betti_numbers(find_retraction(P)).b == h_vector(P) == (1, 2, 2, 1)
    for perm in itertools.islice(itertools.permutations(range(6)), 50):
        try:
            seq = find_retraction(P, perm)
        except InvalidHint:
            continue
        assert betti_numbers(seq).b == (1, 2, 2, 1)
