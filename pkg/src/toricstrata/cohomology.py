"""GKM descriptions of equivariant cohomology and K-theory.

Classes are tuples of (Laurent) polynomials indexed by the vertices of the
polytope, one per maximal cone of the normal fan. A tuple is admissible
when along every edge of the polytope the difference of the two endpoint
values is divisible by the edge's Euler class: the primitive edge direction
as a linear form for cohomology, ``1 - t^w`` for K-theory.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Mapping

from .linalg import format_rational, kernel_basis, primitive, rank, saturate
from .polytope import Cone, LatticePolytope, edge_direction, normal_cone
from .retraction import BettiVector, find_retraction
from .symbolic import (
    LaurentPolynomial,
    LinearForm,
    Polynomial,
    divides_binomial,
    divides_linear,
)


class InconsistentSeries(ValueError):
    pass


@dataclass(frozen=True)
class GKMEdge:
    v: int
    w: int
    weight: tuple
    face: int  # face-lattice index of the edge


@dataclass(frozen=True)
class GKMGraph:
    polytope: LatticePolytope
    vertices: tuple
    edges: tuple

    def scaled(self, edge_index: int, factor: int) -> "GKMGraph":
        """Copy with one edge weight multiplied by a nonzero integer."""
        if factor == 0:
            raise ValueError("scale factor must be nonzero")
        edges = list(self.edges)
        e = edges[edge_index]
        edges[edge_index] = GKMEdge(e.v, e.w, tuple(factor * x for x in e.weight), e.face)
        return GKMGraph(self.polytope, self.vertices, tuple(edges))

    def edge(self, v: int, w: int) -> GKMEdge:
        a, b = sorted((v, w))
        return next(e for e in self.edges if (e.v, e.w) == (a, b))


@dataclass(frozen=True)
class PiecewiseElement:
    """A candidate class: one polynomial per vertex.

    ``edge_multipliers`` (K-theory only) replaces the divisor of an edge by
    ``1 - t^(m w)``; missing edges use ``m = 1``.
    """

    theory: str
    ring: str
    assignments: tuple
    edge_multipliers: Mapping = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        if self.theory not in ("H", "K"):
            raise ValueError("theory must be 'H' or 'K'")
        if self.ring not in ("Q", "Z"):
            raise ValueError("ring must be 'Q' or 'Z'")
        if self.theory == "K" and self.ring == "Z":
            raise ValueError("integral coefficients are supported for cohomology only")
        kinds = {type(p) for p in self.assignments}
        want = Polynomial if self.theory == "H" else LaurentPolynomial
        if self.theory == "K":
            object.__setattr__(
                self,
                "assignments",
                tuple(p if isinstance(p, LaurentPolynomial) else LaurentPolynomial(p.num_vars, p.terms)
                      for p in self.assignments),
            )
        elif kinds - {Polynomial}:
            raise TypeError(f"cohomology entries must be {want.__name__}")
        if len({p.num_vars for p in self.assignments}) > 1:
            raise ValueError("entries have different variable counts")

    @classmethod
    def constant(cls, num_vertices: int, n: int, c=1, theory="H", ring="Q"):
        kind = Polynomial if theory == "H" else LaurentPolynomial
        return cls(theory, ring, tuple(kind.constant(n, c) for _ in range(num_vertices)))

    def __getitem__(self, v):
        return self.assignments[v]

    def _combine(self, other, op):
        if (self.theory, len(self.assignments)) != (other.theory, len(other.assignments)):
            raise ValueError("incompatible elements")
        ring = "Z" if self.ring == other.ring == "Z" else "Q"
        return PiecewiseElement(
            self.theory, ring, tuple(op(a, b) for a, b in zip(self.assignments, other.assignments)),
            dict(self.edge_multipliers),
        )

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __mul__(self, other):
        return self._combine(other, lambda a, b: a * b)

    def replace(self, v: int, value) -> "PiecewiseElement":
        vals = list(self.assignments)
        vals[v] = value
        return PiecewiseElement(self.theory, self.ring, tuple(vals), dict(self.edge_multipliers))


@dataclass(frozen=True)
class Violation:
    edge: tuple
    weight: tuple
    difference: object
    reason: str = "not divisible"

    def __str__(self):
        w = "(" + ",".join(str(x) for x in self.weight) + ")"
        return f"edge ({self.edge[0]},{self.edge[1]}) weight={w}: {self.difference} {self.reason}"


def gkm_graph(P: LatticePolytope) -> GKMGraph:
    """The 1-skeleton of ``P`` with primitive edge directions as weights."""
    find_retraction(P)  # raises NotAlmostSimple
    L = P.face_lattice
    edges = tuple(GKMEdge(v, w, edge_direction(P, (v, w)), fi) for fi, v, w in L.edges)
    return GKMGraph(P, tuple(range(P.num_vertices)), edges)


def gkm_check_H(G: GKMGraph, x: PiecewiseElement, ring: str | None = None) -> list:
    """Edges where the GKM condition fails; an empty list means ``x`` passes."""
    from .singularity import divisive_cached

    if x.theory != "H":
        raise ValueError("gkm_check_H needs a cohomology element")
    ring = ring or x.ring
    if ring == "Z" and not divisive_cached(G.polytope):
        warnings.warn("integral check on a polytope that is not divisive", stacklevel=2)
    out = []
    for e in G.edges:
        diff = x[e.v] - x[e.w]
        ok, _ = divides_linear(LinearForm(e.weight), diff, ring)
        if not ok:
            out.append(Violation((e.v, e.w), e.weight, diff))
    return out


def gkm_check_K(G: GKMGraph, x: PiecewiseElement) -> list:
    """Edges where ``1 - t^w`` fails to divide the difference."""
    if x.theory != "K":
        raise ValueError("gkm_check_K needs a K-theory element")
    out = []
    for e in G.edges:
        m = x.edge_multipliers.get((e.v, e.w), 1)
        weight = tuple(m * c for c in e.weight)
        diff = x[e.v] - x[e.w]
        ok, _ = divides_binomial(weight, diff)
        if not ok:
            out.append(Violation((e.v, e.w), weight, diff))
    return out


def restriction_to_cone(f: Polynomial, sigma: Cone) -> Polynomial:
    """Normal form of ``f`` modulo the linear forms vanishing on ``span(sigma)``.

    The annihilator is taken in reduced row echelon form; each pivot variable
    is eliminated through its row, so the result is canonical.
    """
    n = f.num_vars
    rows = sigma.linear_span_annihilator(n)
    images = [Polynomial.var(n, i) for i in range(n)]
    for row in rows:
        p = next(i for i, c in enumerate(row) if c)
        images[p] = Polynomial(
            n, {tuple(int(j == i) for j in range(n)): -c for i, c in enumerate(row) if i != p and c}
        )
    return f.substitute_linear(images)


def pp_check(P: LatticePolytope, x: PiecewiseElement, mode: str = "walls") -> list:
    """Piecewise-polynomial compatibility; returns violations (empty means pass).

    ``walls`` compares the two endpoint values restricted to the wall dual to
    each edge. ``all_faces`` compares every pair of vertices on every face
    containing both, modulo that face's normal cone.
    """
    if x.theory != "H":
        raise ValueError("piecewise check needs a cohomology element")
    L = P.face_lattice
    out = []
    if mode == "walls":
        for fi, v, w in L.edges:
            sigma = normal_cone(P, fi)
            a, b = restriction_to_cone(x[v], sigma), restriction_to_cone(x[w], sigma)
            if a != b:
                out.append(Violation((v, w), edge_direction(P, (v, w)), x[v] - x[w], "restrictions differ on wall"))
    elif mode in ("all", "all_faces"):
        for fi, face in enumerate(L.faces):
            vs = sorted(face.vertex_set)
            if len(vs) < 2:
                continue
            sigma = normal_cone(P, fi)
            res = {v: restriction_to_cone(x[v], sigma) for v in vs}
            for i, v in enumerate(vs):
                for w in vs[i + 1:]:
                    if res[v] != res[w]:
                        out.append(
                            Violation((v, w), tuple(sorted(face.vertex_set)), x[v] - x[w],
                                      f"restrictions differ on the cone of face {fi}")
                        )
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return out


# ---------------------------------------------------------------------------
# Hilbert function


def _unit(n: int, j: int) -> tuple:
    return tuple(int(i == j) for i in range(n))


def _monomials(n: int, d: int) -> list:
    if n == 0:
        return [()] if d == 0 else []
    if n == 1:
        return [(d,)]
    return [(k,) + rest for k in range(d, -1, -1) for rest in _monomials(n - 1, d - k)]


def hilbert_function(P: LatticePolytope, d_max: int) -> list:
    """Dimensions of the degree-``d`` pieces of the piecewise algebra over Q.

    For each edge with weight ``w``, a lattice basis ``B`` of ``w^perp``
    parametrises the wall hyperplane, and the difference of the endpoint
    values must vanish identically on it. The dimension is the number of
    unknown coefficients minus the rank of those linear conditions.
    """
    find_retraction(P)
    n = P.ambient_dim
    L = P.face_lattice
    nv = P.num_vertices
    walls = []
    for fi, v, w in L.edges:
        wt = edge_direction(P, (v, w))
        B = saturate([primitive(b) for b in kernel_basis([list(wt)], n)], n)
        # u_i = sum_j B[j][i] s_j
        images = [
            Polynomial(n - 1, {_unit(n - 1, j): B[j][i] for j in range(n - 1) if B[j][i]})
            for i in range(n)
        ]
        walls.append((v, w, images))
    dims = []
    for d in range(d_max + 1):
        monos = _monomials(n, d)
        m = len(monos)
        rows = []
        for v, w, images in walls:
            pulled = [Polynomial.monomial(a).substitute_linear(images) for a in monos]
            targets = sorted({e for p in pulled for e in p.terms})
            for t in targets:
                row = [Fraction(0)] * (m * nv)
                for k, p in enumerate(pulled):
                    c = p.coefficient(t)
                    if c:
                        row[v * m + k] += c
                        row[w * m + k] -= c
                rows.append(row)
        dims.append(m * nv - (rank(rows) if rows else 0))
    return dims


def poincare_from_hilbert(P: LatticePolytope, dims) -> BettiVector:
    """Recover ``(b_0, b_2, ..., b_2n)`` from Hilbert dimensions by finite differences."""
    n = P.ambient_dim
    if len(dims) < n + 1:
        raise ValueError(f"need dimensions up to degree at least {n}")
    h = []
    for k in range(len(dims)):
        h.append(sum((-1) ** i * comb(n, i) * dims[k - i] for i in range(min(k, n) + 1)))
    if any(x < 0 for x in h):
        raise InconsistentSeries(f"negative numerator coefficient in {h}")
    if any(h[n + 1:]):
        raise InconsistentSeries(f"numerator has terms beyond degree {n}: {h}")
    return BettiVector(tuple(h[: n + 1]))


def free_module_dims(betti: BettiVector, n: int, d_max: int) -> list:
    """``sum_k b_2k * C(d - k + n - 1, n - 1)`` for ``d = 0..d_max``."""
    return [
        sum(b * comb(d - k + n - 1, n - 1) for k, b in enumerate(betti.b) if d >= k)
        for d in range(d_max + 1)
    ]


def format_vector(v) -> str:
    return "(" + ",".join(format_rational(x) for x in v) + ")"
