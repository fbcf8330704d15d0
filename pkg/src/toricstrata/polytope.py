"""Full-dimensional polytopes with exact rational vertices.

Facet and vertex enumeration are brute force over n-subsets, which is fine
for the small polytopes this package is meant for (a few dozen vertices in
dimension at most 4).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import comb
from typing import Sequence

from .linalg import (
    dot,
    kernel_basis,
    primitive,
    rank,
    rref,
    solve,
)


class PolytopeError(ValueError):
    pass


class NotFullDimensional(PolytopeError):
    pass


class DuplicatePoint(PolytopeError):
    pass


class Unbounded(PolytopeError):
    pass


class Empty(PolytopeError):
    pass


@dataclass(frozen=True)
class Facet:
    """The inequality ``<normal, x> <= offset`` with a primitive integer normal."""

    normal: tuple
    offset: Fraction

    def value(self, x) -> Fraction:
        return dot(self.normal, x)


@dataclass(frozen=True)
class Face:
    vertex_set: frozenset
    facet_set: frozenset
    dim: int


@dataclass(frozen=True)
class FaceLattice:
    """All nonempty faces, sorted by dimension then by vertex indices."""

    faces: tuple
    containment: frozenset  # pairs (i, j) with faces[i] a proper face of faces[j]
    ambient_dim: int

    @cached_property
    def index(self) -> dict:
        return {f.vertex_set: i for i, f in enumerate(self.faces)}

    def face_index(self, vertex_set) -> int:
        return self.index[frozenset(vertex_set)]

    def of_dim(self, d: int) -> list:
        return [i for i, f in enumerate(self.faces) if f.dim == d]

    @property
    def f_vector(self) -> tuple:
        n = self.ambient_dim
        return tuple(sum(1 for f in self.faces if f.dim == d) for d in range(n))

    @cached_property
    def vertex_face(self) -> dict:
        """Vertex index -> index of its 0-dimensional face."""
        return {next(iter(f.vertex_set)): i for i, f in enumerate(self.faces) if f.dim == 0}

    @cached_property
    def edges(self) -> tuple:
        """1-dimensional faces as (face index, v, w) with v < w."""
        out = []
        for i, f in enumerate(self.faces):
            if f.dim == 1:
                v, w = sorted(f.vertex_set)
                out.append((i, v, w))
        return tuple(out)

    def join(self, vertex_set) -> int:
        """Smallest face containing the given vertices."""
        vs = frozenset(vertex_set)
        best = None
        for i, f in enumerate(self.faces):
            if vs <= f.vertex_set and (best is None or f.dim < self.faces[best].dim):
                best = i
        return best

    def euler_characteristic(self) -> int:
        """Alternating sum over the proper nonempty faces."""
        return sum((-1) ** f.dim for f in self.faces if f.dim < self.ambient_dim)


@dataclass(frozen=True)
class LatticePolytope:
    ambient_dim: int
    vertices: tuple
    facets: tuple
    incidence: tuple
    name: str = field(default="", compare=False)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @cached_property
    def face_lattice(self) -> FaceLattice:
        return face_lattice(self)

    def vertex_index(self, point) -> int:
        p = tuple(Fraction(x) for x in point)
        return self.vertices.index(p)

    def facets_at(self, v: int) -> list:
        return [i for i, inc in enumerate(self.incidence[v]) if inc]


def _as_point(p) -> tuple:
    return tuple(Fraction(x) for x in p)


def _affine_rank(points) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([[a - b for a, b in zip(p, p0)] for p in points[1:]]) if len(points) > 1 else 0


def _build(points, facets, name) -> LatticePolytope:
    incidence = tuple(tuple(f.value(p) == f.offset for f in facets) for p in points)
    return LatticePolytope(len(points[0]), tuple(points), tuple(facets), incidence, name)


def facets_from_vertices(points: Sequence[Sequence], name: str = "") -> LatticePolytope:
    """Convex hull of a point set, with the complete irredundant facet list.

    Points that are not vertices of the hull are dropped; the remaining
    vertices keep their relative input order.
    """
    pts = [_as_point(p) for p in points]
    if not pts:
        raise NotFullDimensional("empty point set")
    n = len(pts[0])
    if any(len(p) != n for p in pts):
        raise PolytopeError("points have different dimensions")
    if len(set(pts)) != len(pts):
        raise DuplicatePoint("duplicate point in vertex list")
    if _affine_rank(pts) < n:
        raise NotFullDimensional(f"points do not affinely span R^{n}")

    if n == 1:
        lo, hi = min(p[0] for p in pts), max(p[0] for p in pts)
        facets = [Facet((1,), hi), Facet((-1,), -lo)]
    else:
        facets = []
        seen = set()
        for combo in itertools.combinations(range(len(pts)), n):
            base = pts[combo[0]]
            diffs = [[a - b for a, b in zip(pts[i], base)] for i in combo[1:]]
            ker = kernel_basis(diffs, n)
            if len(ker) != 1:
                continue
            a = primitive(ker[0])
            b = dot(a, base)
            vals = [dot(a, p) for p in pts]
            if all(x <= b for x in vals):
                pass
            elif all(x >= b for x in vals):
                a, b = tuple(-x for x in a), -b
            else:
                continue
            if a not in seen:
                seen.add(a)
                facets.append(Facet(a, Fraction(b)))

    # keep only extreme points: the normals of the facets through p have rank n
    verts = []
    for p in pts:
        normals = [f.normal for f in facets if f.value(p) == f.offset]
        if len(normals) >= n and rank(normals) == n:
            verts.append(p)
    return _build(verts, facets, name)


def _normalise_inequality(normal, offset) -> Facet:
    normal = [Fraction(x) for x in normal]
    if all(x == 0 for x in normal):
        raise PolytopeError("inequality with zero normal")
    prim = primitive(normal)
    i = next(i for i, x in enumerate(prim) if x)
    scale = prim[i] / normal[i]  # positive
    return Facet(prim, Fraction(offset) * scale)


def vertices_from_facets(inequalities: Sequence, name: str = "") -> LatticePolytope:
    """Polytope ``{x : <a_i, x> <= b_i}`` from (normal, offset) pairs.

    Normals may be any nonzero rational vectors; they are rescaled to
    primitive integer vectors. Redundant inequalities are dropped.
    """
    ineqs = [
        f if isinstance(f, Facet) else _normalise_inequality(*f) for f in inequalities
    ]
    if not ineqs:
        raise Unbounded("no inequalities")
    n = len(ineqs[0].normal)
    A = [list(f.normal) for f in ineqs]
    if rank(A) < n:
        raise Unbounded("inequalities leave a lineality direction")
    # a nonzero recession direction would be an extreme ray of {Ax <= 0},
    # i.e. the 1-dimensional solution of n-1 independent tight rows
    for combo in itertools.combinations(range(len(ineqs)), n - 1):
        ker = kernel_basis([A[i] for i in combo], n) if n > 1 else [[Fraction(1)]]
        if len(ker) != 1:
            continue
        for ray in (ker[0], [-x for x in ker[0]]):
            if all(dot(a, ray) <= 0 for a in A):
                raise Unbounded("region contains a ray")
        if n == 1:
            break

    found = []
    for combo in itertools.combinations(range(len(ineqs)), n):
        sub = [A[i] for i in combo]
        if rank(sub) < n:
            continue
        x = tuple(solve(sub, [ineqs[i].offset for i in combo]))
        if all(f.value(x) <= f.offset for f in ineqs) and x not in found:
            found.append(x)
    if not found:
        raise Empty("inequalities are infeasible")
    found.sort()
    if _affine_rank(found) < n:
        raise NotFullDimensional("feasible region is not full-dimensional")
    return facets_from_vertices(found, name)


def from_description(vertices=None, facets=None, name: str = "") -> LatticePolytope:
    """Build from vertices, facets or both; when both are given they must agree."""
    if vertices is None and facets is None:
        raise PolytopeError("need vertices or facets")
    if vertices is None:
        return vertices_from_facets(facets, name)
    P = facets_from_vertices(vertices, name)
    if len(P.vertices) != len(vertices):
        raise PolytopeError("vertex list contains non-extreme points")
    if facets is not None:
        given = {_normalise_inequality(*f) if not isinstance(f, Facet) else f for f in facets}
        if given != set(P.facets):
            raise PolytopeError("facet list does not match the convex hull of the vertices")
        # keep the caller's facet order
        order = [f if isinstance(f, Facet) else _normalise_inequality(*f) for f in facets]
        P = _build(list(P.vertices), order, name)
    return P


def face_lattice(P: LatticePolytope) -> FaceLattice:
    """Faces as the intersection closure of the facets' vertex sets."""
    n = P.ambient_dim
    facet_vsets = [
        frozenset(v for v in range(P.num_vertices) if P.incidence[v][i]) for i in range(len(P.facets))
    ]
    whole = frozenset(range(P.num_vertices))
    found = {whole}
    frontier = set(facet_vsets)
    found |= frontier
    while frontier:
        new = set()
        for a in frontier:
            for b in facet_vsets:
                c = a & b
                if c and c not in found:
                    new.add(c)
        found |= new
        frontier = new

    faces = []
    for vs in found:
        fs = frozenset(i for i, fv in enumerate(facet_vsets) if vs <= fv)
        pts = [P.vertices[v] for v in sorted(vs)]
        faces.append(Face(vs, fs, _affine_rank(pts)))
    faces.sort(key=lambda f: (f.dim, sorted(f.vertex_set)))
    containment = frozenset(
        (i, j)
        for i, a in enumerate(faces)
        for j, b in enumerate(faces)
        if i != j and a.vertex_set < b.vertex_set
    )
    return FaceLattice(tuple(faces), containment, n)


def is_simple_vertex(P: LatticePolytope, v: int) -> bool:
    return sum(P.incidence[v]) == P.ambient_dim


def is_simple(P: LatticePolytope) -> bool:
    return all(is_simple_vertex(P, v) for v in range(P.num_vertices))


def h_vector(P: LatticePolytope) -> tuple:
    """h-vector from the f-vector via ``h(t) = sum_k f_k (t-1)^k``.

    ``f_k`` counts faces of dimension ``k`` (with ``f_n = 1``). Meaningful as a
    Betti vector only for simple polytopes.
    """
    n = P.ambient_dim
    f = P.face_lattice.f_vector + (1,)
    h = [0] * (n + 1)
    for k in range(n + 1):
        for j in range(k + 1):
            h[j] += f[k] * comb(k, j) * (-1) ** (k - j)
    return tuple(h)


def edge_direction(P: LatticePolytope, e) -> tuple:
    """Primitive integer vector along an edge (sign unspecified).

    ``e`` is a face index of a 1-dimensional face, or a pair of vertex indices.
    """
    if isinstance(e, int):
        face = P.face_lattice.faces[e]
        if face.dim != 1:
            raise PolytopeError("not an edge")
        v, w = sorted(face.vertex_set)
    else:
        v, w = e
    return primitive([a - b for a, b in zip(P.vertices[w], P.vertices[v])])


# ---------------------------------------------------------------------------
# normal fan


@dataclass(frozen=True)
class Cone:
    generators: tuple
    dim: int

    def contains(self, x) -> bool:
        """Exact membership test via simplicial subcones (Caratheodory)."""
        x = [Fraction(c) for c in x]
        if all(c == 0 for c in x):
            return True
        gens = [list(g) for g in self.generators]
        for size in range(1, len(gens) + 1):
            for combo in itertools.combinations(gens, size):
                if rank(combo) < size:
                    continue
                cols = [[g[i] for g in combo] for i in range(len(x))]
                sol = solve(cols, x)
                if sol is not None and all(c >= 0 for c in sol):
                    return True
        return False

    def linear_span_annihilator(self, n: int) -> list:
        """Basis (in RREF) of the linear forms vanishing on the span of the cone."""
        ker = kernel_basis([list(g) for g in self.generators], n) if self.generators else [
            [Fraction(int(i == j)) for j in range(n)] for i in range(n)
        ]
        R, _ = rref(ker)
        return R


@dataclass(frozen=True)
class Fan:
    cones: tuple  # cones[i] is the normal cone of face i of the face lattice
    face_of: frozenset  # (i, j): cone i is a face of cone j
    maximal: dict = field(compare=False, hash=False)  # vertex index -> cone index


def normal_cone(P: LatticePolytope, face_index: int) -> Cone:
    face = P.face_lattice.faces[face_index]
    gens = tuple(P.facets[i].normal for i in sorted(face.facet_set))
    return Cone(gens, rank(gens) if gens else 0)


def normal_fan(P: LatticePolytope) -> Fan:
    L = P.face_lattice
    cones = tuple(normal_cone(P, i) for i in range(len(L.faces)))
    # a larger face has a smaller normal cone
    face_of = frozenset((j, i) for i, j in L.containment)
    return Fan(cones, face_of, dict(((v, fi) for v, fi in L.vertex_face.items())))
