import pytest

from toricstrata.cohomology import PiecewiseElement, gkm_graph
from toricstrata.io import corpus
from toricstrata.symbolic import Polynomial

ALMOST_SIMPLE = [
    "gz3",
    "cube",
    "square",
    "segment",
    "simplex2",
    "simplex3",
    "pyramid",
    "triangle_1_2",
    "triangle_2_3",
]

# worked removal order for the Gelfand-Zetlin polytope in gz3.json vertex indexing:
# (0,2,2) (1,2,2) (1,2,1) (0,1,1) (0,2,0) (0,1,0) (1,1,1)
GZ_WORKED_ORDER = (0, 1, 2, 5, 3, 4, 6)


@pytest.fixture(scope="session")
def gz():
    return corpus("gz3")


@pytest.fixture(scope="session")
def cube():
    return corpus("cube")


@pytest.fixture(scope="session")
def square():
    return corpus("square")


@pytest.fixture(scope="session")
def octahedron():
    return corpus("octahedron")


def random_poly(rng, n, degree):
    terms = {}
    for _ in range(rng.randint(0, 3)):
        e = [0] * n
        for _ in range(degree):
            e[rng.randrange(n)] += 1
        terms[tuple(e)] = rng.randint(-3, 3)
    return Polynomial(n, terms)


def random_elements(P, rng, count, rows=None):
    """Passing elements as polynomial combinations of known classes, and perturbations."""
    n, nv = P.ambient_dim, P.num_vertices
    G = gkm_graph(P)
    if rows is None:
        # the coordinate classes u_i, the unit, and for each vertex the product of its edge weights there
        rows = [PiecewiseElement("H", "Q", tuple(Polynomial.var(n, i) for _ in range(nv))) for i in range(n)]
        rows.append(PiecewiseElement.constant(nv, n))
        for v in range(nv):
            thom = Polynomial.constant(n, 1)
            for e in G.edges:
                if v in (e.v, e.w):
                    thom = thom * Polynomial(n, {tuple(int(k == j) for k in range(n)): c
                                                 for j, c in enumerate(e.weight) if c})
            vals = [Polynomial.zero(n)] * nv
            vals[v] = thom
            rows.append(PiecewiseElement("H", "Q", tuple(vals)))
    passing = []
    for _ in range(count):
        acc = PiecewiseElement("H", "Q", tuple(Polynomial.zero(n) for _ in range(nv)))
        for r in rows:
            g = random_poly(rng, n, rng.randint(0, 1))
            acc = acc + PiecewiseElement("H", "Q", tuple(g * p for p in r.assignments))
        passing.append(acc)
    failing = []
    for x in passing:
        v = rng.randrange(nv)
        failing.append(x.replace(v, x[v] + random_poly(rng, n, 1) + Polynomial.var(n, rng.randrange(n))))
    return passing, failing
