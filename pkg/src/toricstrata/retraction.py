"""Retraction sequences of polytopes.

A retraction sequence removes, one at a time, a *free* vertex together with
every face containing it, until a single vertex is left. A vertex of a
subcomplex is free when the faces containing it have a unique maximal
member ``E`` and the vertex is a simple vertex of ``E``. Polytopes that admit
such a sequence are called almost simple.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from .linalg import dot
from .polytope import LatticePolytope, PolytopeError, is_simple


class NotAlmostSimple(Exception):
    """No retraction sequence exists.

    ``explored`` counts the distinct subcomplexes visited by the exhaustive
    search, all of which were dead ends.
    """

    def __init__(self, message: str, explored: int = 0):
        super().__init__(message)
        self.explored = explored


class InvalidHint(ValueError):
    pass


class NotSimple(PolytopeError):
    pass


class NotGeneric(ValueError):
    pass


@dataclass(frozen=True)
class PolytopalComplex:
    """A subface-closed set of faces of a polytope, by face-lattice index."""

    polytope: LatticePolytope
    faces: frozenset

    @classmethod
    def full(cls, P: LatticePolytope) -> "PolytopalComplex":
        return cls(P, frozenset(range(len(P.face_lattice.faces))))

    @property
    def vertices(self) -> list:
        L = self.polytope.face_lattice
        return sorted(v for v, fi in L.vertex_face.items() if fi in self.faces)

    def is_connected(self) -> bool:
        L = self.polytope.face_lattice
        verts = self.vertices
        if len(verts) <= 1:
            return True
        adj = {v: [] for v in verts}
        for fi, v, w in L.edges:
            if fi in self.faces:
                adj[v].append(w)
                adj[w].append(v)
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(verts)


@dataclass(frozen=True)
class RetractionStep:
    vertex: int
    max_face: int  # face-lattice index of E_j
    k: int
    edges: tuple  # (edge face index, other endpoint) for the k edges of E_j at the vertex


@dataclass(frozen=True)
class RetractionSequence:
    polytope: LatticePolytope
    steps: tuple

    @property
    def k_sequence(self) -> tuple:
        return tuple(s.k for s in self.steps)

    @property
    def order(self) -> tuple:
        return tuple(s.vertex for s in self.steps)

    def to_json(self) -> list:
        from .io import format_point

        L = self.polytope.face_lattice
        return [
            {
                "vertex": s.vertex,
                "coords": format_point(self.polytope.vertices[s.vertex]),
                "k": s.k,
                "max_face_vertices": sorted(L.faces[s.max_face].vertex_set),
                "edges_to": [w for _, w in s.edges],
            }
            for s in self.steps
        ]


@dataclass(frozen=True)
class BettiVector:
    """Even Betti numbers ``(b_0, b_2, ..., b_2n)``; odd ones vanish."""

    b: tuple

    def __str__(self):
        return " ".join(f"b{2 * i}={x}" for i, x in enumerate(self.b))


def star(C: PolytopalComplex, v: int) -> frozenset:
    """Faces of ``C`` containing vertex ``v``."""
    faces = C.polytope.face_lattice.faces
    return frozenset(i for i in C.faces if v in faces[i].vertex_set)


def _maximal(faces, idx) -> list:
    return [
        i for i in idx if not any(j != i and faces[i].vertex_set < faces[j].vertex_set for j in idx)
    ]


def _free_step(C: PolytopalComplex, v: int) -> RetractionStep | None:
    L = C.polytope.face_lattice
    st = star(C, v)
    top = _maximal(L.faces, st)
    if len(top) != 1:
        return None
    E = top[0]
    k = L.faces[E].dim
    if k < 1:
        return None
    Evs = L.faces[E].vertex_set
    edges = tuple(
        (fi, w if a == v else a)
        for fi, a, w in L.edges
        if v in (a, w) and {a, w} <= Evs
    )
    if len(edges) != k:
        return None
    return RetractionStep(v, E, k, edges)


def free_vertices(C: PolytopalComplex) -> list:
    """Free vertices of ``C`` as ``(vertex, max_face, k)``, by vertex index."""
    out = []
    for v in C.vertices:
        step = _free_step(C, v)
        if step is not None:
            out.append((step.vertex, step.max_face, step.k))
    return out


def delete_vertex(C: PolytopalComplex, v: int) -> PolytopalComplex:
    return PolytopalComplex(C.polytope, C.faces - star(C, v))


def _final_step(C: PolytopalComplex) -> RetractionStep | None:
    if len(C.faces) == 1:
        (fi,) = C.faces
        face = C.polytope.face_lattice.faces[fi]
        if face.dim == 0:
            return RetractionStep(next(iter(face.vertex_set)), fi, 0, ())
    return None


def _candidates(C: PolytopalComplex) -> list:
    final = _final_step(C)
    if final is not None:
        return [final]
    return [s for s in (_free_step(C, v) for v in C.vertices) if s is not None]


def _search(P: LatticePolytope, accept=None, limit: int | None = 1) -> tuple:
    """Depth-first search over free-vertex choices.

    ``accept(C, step)`` can veto a step. Returns ``(sequences, explored)``;
    subcomplexes already known to be dead ends are memoised by their exact
    face set.
    """
    dead = set()
    found = []
    explored = 0

    def dfs(C, path) -> bool:
        nonlocal explored
        explored += 1
        if not C.faces:
            found.append(RetractionSequence(P, tuple(path)))
            return True
        if not C.is_connected():
            dead.add(C.faces)
            return False
        produced = False
        for step in _candidates(C):
            if accept is not None and not accept(C, step):
                continue
            nxt = delete_vertex(C, step.vertex)
            if nxt.faces in dead:
                continue
            path.append(step)
            if dfs(nxt, path):
                produced = True
            path.pop()
            if limit is not None and len(found) >= limit:
                return produced
        if not produced:
            dead.add(C.faces)
        return produced

    dfs(PolytopalComplex.full(P), [])
    return found, explored


def find_retraction(P: LatticePolytope, order_hint: Sequence[int] | None = None) -> RetractionSequence:
    """A retraction sequence of ``P``; raises :class:`NotAlmostSimple` if none exists.

    With ``order_hint`` the given vertex order is replayed and each step
    validated; a vertex that is not free at its stage raises InvalidHint.
    """
    if order_hint is not None:
        return _replay(P, order_hint)
    found, explored = _search(P)
    if not found:
        raise NotAlmostSimple(
            f"no retraction sequence: exhaustive search visited {explored} subcomplexes", explored
        )
    return found[0]


def _replay(P: LatticePolytope, order: Sequence[int]) -> RetractionSequence:
    order = list(order)
    if sorted(order) != list(range(P.num_vertices)):
        raise InvalidHint("order must list every vertex index exactly once")
    C = PolytopalComplex.full(P)
    steps = []
    for stage, v in enumerate(order):
        step = _final_step(C) if stage == len(order) - 1 else _free_step(C, v)
        if step is None or step.vertex != v:
            raise InvalidHint(f"vertex {v} is not free at stage {stage + 1}")
        steps.append(step)
        C = delete_vertex(C, v)
    return RetractionSequence(P, tuple(steps))


def enumerate_retractions(P: LatticePolytope, limit: int) -> list:
    """Up to ``limit`` distinct retraction sequences in deterministic order."""
    if limit < 1:
        raise ValueError("limit must be at least 1")
    return _search(P, limit=limit)[0]


def iter_retractions(P: LatticePolytope) -> Iterator[RetractionSequence]:
    yield from _search(P, limit=None)[0]


def is_almost_simple(P: LatticePolytope) -> bool:
    try:
        find_retraction(P)
    except NotAlmostSimple:
        return False
    return True


def height_retraction(P: LatticePolytope, phi: Sequence[int]) -> RetractionSequence:
    """Retraction of a simple polytope removing vertices by decreasing height."""
    if not is_simple(P):
        raise NotSimple("height retractions need a simple polytope")
    heights = [dot(phi, p) for p in P.vertices]
    if len(set(heights)) != len(heights):
        raise NotGeneric("covector takes equal values on two vertices")
    order = sorted(range(P.num_vertices), key=lambda v: heights[v], reverse=True)
    return _replay(P, order)


def betti_numbers(seq: RetractionSequence) -> BettiVector:
    counts = Counter(seq.k_sequence)
    n = seq.polytope.ambient_dim
    return BettiVector(tuple(counts.get(k, 0) for k in range(n + 1)))
