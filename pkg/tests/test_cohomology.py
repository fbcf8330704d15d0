import random
import warnings

import pytest

from toricstrata.cohomology import (
    InconsistentSeries,
    PiecewiseElement,
    free_module_dims,
    gkm_check_H,
    gkm_check_K,
    gkm_graph,
    hilbert_function,
    poincare_from_hilbert,
    pp_check,
    restriction_to_cone,
)
from toricstrata.io import corpus, corpus_element
from toricstrata.polytope import Cone, normal_cone
from toricstrata.retraction import NotAlmostSimple, betti_numbers, find_retraction
from toricstrata.symbolic import LaurentPolynomial, parse

from conftest import ALMOST_SIMPLE, random_elements, random_poly

U = ["u1", "u2", "u3"]
ROWS = [f"table1_row{i}" for i in range(1, 7)]


def P3(text):
    return parse(text, U)


def element(values, ring="Q"):
    return PiecewiseElement("H", ring, tuple(P3(t) if isinstance(t, str) else t for t in values))


def test_gkm_graph_examples(gz, square):
    G = gkm_graph(square)
    assert len(G.edges) == 4
    assert {tuple(abs(x) for x in e.weight) for e in G.edges} == {(1, 0), (0, 1)}
    GG = gkm_graph(gz)
    assert len(GG.edges) == 11
    e = GG.edge(gz.vertex_index((1, 1, 1)), gz.vertex_index((1, 2, 2)))
    assert e.weight in {(0, 1, 1), (0, -1, -1)}
    seg = gkm_graph(corpus("segment"))
    assert [abs(e.weight[0]) for e in seg.edges] == [1]


def test_gkm_graph_needs_almost_simple(octahedron):
    with pytest.raises(NotAlmostSimple):
        gkm_graph(octahedron)


@pytest.mark.parametrize("name", ALMOST_SIMPLE)
def test_weights_parallel_to_edges(name):
    P = corpus(name)
    for e in gkm_graph(P).edges:
        d = [a - b for a, b in zip(P.vertices[e.w], P.vertices[e.v])]
        # 2x2 minors vanish
        assert all(d[i] * e.weight[j] == d[j] * e.weight[i] for i in range(len(d)) for j in range(len(d)))


@pytest.mark.parametrize("row", ROWS)
def test_table_rows_pass_every_mode(gz, row):
    x = corpus_element(row, gz.num_vertices)
    G = gkm_graph(gz)
    assert gkm_check_H(G, x) == []
    assert gkm_check_H(G, x, "Q") == []
    assert pp_check(gz, x, "walls") == []
    assert pp_check(gz, x, "all_faces") == []


def test_constant_and_identity(gz):
    G = gkm_graph(gz)
    assert gkm_check_H(G, PiecewiseElement.constant(7, 3, 5)) == []
    assert pp_check(gz, PiecewiseElement.constant(7, 3, 1), "walls") == []


def test_violation_at_bottom_vertex(gz):
    v = gz.vertex_index((0, 1, 0))
    x = element(["u1" if i == v else "0" for i in range(7)])
    bad = gkm_check_H(gkm_graph(gz), x)
    w = gz.vertex_index((0, 2, 0))
    hit = [b for b in bad if set(b.edge) == {v, w}]
    assert hit and hit[0].weight in {(0, 1, 0), (0, -1, 0)}
    assert all(v in b.edge for b in bad)
    assert str(hit[0]).startswith(f"edge ({min(v, w)},{max(v, w)}) weight=(0,")
    assert str(hit[0]).endswith("not divisible")


def test_row3_perturbation_fails(gz):
    x = corpus_element("table1_row3", gz.num_vertices)
    v = gz.vertex_index((0, 1, 1))
    assert x[v] == P3("u3")
    y = x.replace(v, P3("u1"))
    assert gkm_check_H(gkm_graph(gz), y)
    assert pp_check(gz, y, "walls")
    assert pp_check(gz, y, "all_faces")


def test_ring_closure(gz):
    G = gkm_graph(gz)
    rows = [corpus_element(r, gz.num_vertices) for r in ROWS]
    for a in rows:
        for b in rows:
            assert gkm_check_H(G, a + b) == []
            assert gkm_check_H(G, a * b) == []


def test_integral_mode_and_scaling_witness():
    P = corpus("segment")
    G = gkm_graph(P)
    x = PiecewiseElement("H", "Z", (parse("u1", ["u1"]), parse("0", ["u1"])))
    assert gkm_check_H(G, x) == []
    G2 = G.scaled(0, 2)
    # over Q the scale of the divisor is irrelevant, over Z it is not
    assert gkm_check_H(G2, x, "Q") == []
    assert len(gkm_check_H(G2, x, "Z")) == 1


@pytest.mark.parametrize("name", ["gz3", "cube", "square"])
def test_rational_verdicts_scale_invariant(name):
    P = corpus(name)
    G = gkm_graph(P)
    rng = random.Random(7)
    n = P.ambient_dim
    for _ in range(10):
        x = PiecewiseElement("H", "Q", tuple(random_poly(rng, n, 1) for _ in range(P.num_vertices)))
        base = bool(gkm_check_H(G, x))
        for i in range(len(G.edges)):
            assert bool(gkm_check_H(G.scaled(i, rng.choice([-3, 2, 5])), x)) == base


def test_integral_check_warns_when_not_divisive():
    P = corpus("triangle_2_3")
    x = PiecewiseElement.constant(3, 2, 1, ring="Z")
    with pytest.warns(UserWarning):
        gkm_check_H(gkm_graph(P), x)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        gkm_check_H(gkm_graph(corpus("triangle_1_2")), x)


def test_k_theory_segment():
    P = corpus("segment")
    G = gkm_graph(P)
    assert gkm_check_K(G, corpus_element("segment_k_pass", 2)) == []
    assert len(gkm_check_K(G, corpus_element("segment_k_fail", 2))) == 1
    assert gkm_check_K(G, PiecewiseElement.constant(2, 1, 4, theory="K")) == []


def test_k_theory_edge_multiplier():
    P = corpus("segment")
    G = gkm_graph(P)
    t = ["t1"]
    x = PiecewiseElement("K", "Q", (parse("1 - t1", t, True), parse("0", t, True)))
    assert gkm_check_K(G, x) == []
    # 1 - t1^2 does not divide 1 - t1
    y = PiecewiseElement("K", "Q", x.assignments, {(0, 1): 2})
    assert len(gkm_check_K(G, y)) == 1
    z = PiecewiseElement("K", "Q", (parse("1 - t1^2", t, True), parse("0", t, True)), {(0, 1): 2})
    assert gkm_check_K(G, z) == []


def test_k_theory_gz_line_bundles(gz):
    # t^p at vertex p: t^p - t^q = t^q (1 - t^(q-p)) up to sign, and q - p is a multiple of the edge weight
    G = gkm_graph(gz)
    chi = PiecewiseElement("K", "Q", tuple(LaurentPolynomial.monomial(tuple(int(c) for c in p)) for p in gz.vertices))
    assert gkm_check_K(G, chi) == []
    bad = chi.replace(0, LaurentPolynomial.monomial((5, 0, 0)))
    assert gkm_check_K(G, bad)


def test_restriction_examples():
    f = P3("u1 + u3")
    full = Cone(((1, 0, 0), (0, 1, 0), (0, 0, 1)), 3)
    assert restriction_to_cone(f, full) == f
    ray = Cone(((1, 0, 0),), 1)
    assert restriction_to_cone(f, ray) == P3("u1")


def test_restriction_on_gz_wall(gz):
    L = gz.face_lattice
    a, b = gz.vertex_index((0, 2, 0)), gz.vertex_index((0, 2, 2))
    sigma = normal_cone(gz, L.face_index({a, b}))
    row2 = corpus_element("table1_row2", 7)
    assert row2[a] == P3("u2") and row2[b] == P3("u2 + u3")
    assert restriction_to_cone(row2[a], sigma) == restriction_to_cone(row2[b], sigma) == P3("u2")


@pytest.mark.parametrize("name", ["gz3", "cube", "pyramid"])
def test_restriction_compatibility(name):
    P = corpus(name)
    L = P.face_lattice
    rng = random.Random(name)
    for i, j in sorted(L.containment)[:40]:
        # face i inside face j, so cone(j) is a face of cone(i)
        sigma, tau = normal_cone(P, i), normal_cone(P, j)
        f = random_poly(rng, 3, 2) + random_poly(rng, 3, 1)
        assert restriction_to_cone(f, tau) == restriction_to_cone(restriction_to_cone(f, sigma), tau)


@pytest.mark.parametrize("name", ALMOST_SIMPLE)
def test_three_checks_agree(name):
    P = corpus(name)
    G = gkm_graph(P)
    rng = random.Random(name)
    rows = [corpus_element(r, 7) for r in ROWS] if name == "gz3" else None
    passing, failing = random_elements(P, rng, 15, rows)
    for x in passing:
        assert gkm_check_H(G, x) == []
        assert pp_check(P, x, "walls") == [] and pp_check(P, x, "all_faces") == []
    for x in failing:
        verdicts = {not gkm_check_H(G, x), not pp_check(P, x, "walls"), not pp_check(P, x, "all_faces")}
        assert len(verdicts) == 1


def test_pp_check_rejects_bad_mode(gz):
    with pytest.raises(ValueError):
        pp_check(gz, PiecewiseElement.constant(7, 3), "nope")


def test_hilbert_square_and_degree_zero(square):
    assert hilbert_function(square, 4) == [1, 4, 8, 12, 16]
    for name in ALMOST_SIMPLE:
        assert hilbert_function(corpus(name), 0) == [1]


@pytest.mark.parametrize("name", ALMOST_SIMPLE)
def test_hilbert_matches_free_module(name):
    P = corpus(name)
    b = betti_numbers(find_retraction(P))
    dims = hilbert_function(P, 4)
    assert dims == free_module_dims(b, P.ambient_dim, 4)
    assert poincare_from_hilbert(P, dims) == b


def test_hilbert_gz(gz):
    dims = hilbert_function(gz, 4)
    assert dims == [1, 5, 15, 32, 56]
    assert poincare_from_hilbert(gz, dims).b == (1, 2, 3, 1)


def test_poincare_errors(square):
    assert poincare_from_hilbert(corpus("simplex2"), [1, 3, 6]).b == (1, 1, 1)
    with pytest.raises(InconsistentSeries):
        poincare_from_hilbert(square, [1, 1, 5])
    with pytest.raises(InconsistentSeries):
        poincare_from_hilbert(square, [1, 4, 8, 13])
    with pytest.raises(ValueError):
        poincare_from_hilbert(square, [1, 4])
